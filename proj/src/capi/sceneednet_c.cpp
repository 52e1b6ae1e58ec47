// Copyright 2026 The SceneEDNet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sceneednet/sceneednet.h"

#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "core/camera.hpp"
#include "core/flo.hpp"
#include "core/geometry.hpp"
#include "core/log.hpp"
#include "core/network.hpp"
#include "core/pfm.hpp"
#include "core/workflows.hpp"

struct sedn_tensor {
  sceneednet::TensorF t;
};

struct sedn_network {
  sceneednet::Network<float> net;
};

namespace {

using namespace sceneednet;

thread_local std::string g_last_error;

sedn_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return SEDN_ERR_INVALID_ARGUMENT;
    case ErrorKind::kShape: return SEDN_ERR_SHAPE;
    case ErrorKind::kParse: return SEDN_ERR_PARSE;
    case ErrorKind::kIo: return SEDN_ERR_IO;
    case ErrorKind::kData: return SEDN_ERR_DATA;
    case ErrorKind::kNumeric: return SEDN_ERR_NUMERIC;
    case ErrorKind::kInternal: return SEDN_ERR_INTERNAL;
  }
  return SEDN_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
sedn_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return SEDN_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return SEDN_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
  } catch (...) {
    g_last_error = "internal error: unknown exception";
  }
  return SEDN_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

std::filesystem::path path_arg(const char* p, const char* name) {
  if (p == nullptr || *p == '\0') throw InvalidArgument(std::string(name) + " must be given");
  return std::filesystem::path(p);
}

sedn_tensor* wrap(TensorF t) { return new sedn_tensor{std::move(t)}; }

CameraIntrinsics intrinsics_of(const sedn_camera& c) {
  CameraIntrinsics intr{c.fx, c.fy, c.cx, c.cy, c.baseline};
  intr.validate();
  return intr;
}

}  // namespace

extern "C" {

const char* sedn_last_error(void) { return g_last_error.c_str(); }

const char* sedn_status_name(sedn_status status) {
  switch (status) {
    case SEDN_OK: return "ok";
    case SEDN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SEDN_ERR_SHAPE: return "shape error";
    case SEDN_ERR_PARSE: return "parse error";
    case SEDN_ERR_IO: return "I/O error";
    case SEDN_ERR_DATA: return "data error";
    case SEDN_ERR_NUMERIC: return "numeric error";
    case SEDN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sedn_version(void) { return "1.0.0"; }

void sedn_set_log_callback(sedn_log_fn fn, void* user) {
  if (fn == nullptr) {
    set_log_sink({});
    return;
  }
  set_log_sink([fn, user](LogLevel level, const std::string& message) {
    fn(level == LogLevel::kWarning ? 1 : 0, message.c_str(), user);
  });
}

sedn_status sedn_tensor_create(const size_t* shape, size_t rank, const float* data,
                               sedn_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "tensor_create: out is NULL");
    require(shape != nullptr && rank > 0, "tensor_create: empty shape");
    Shape s(shape, shape + rank);
    TensorF t(s);
    if (data) std::memcpy(t.raw(), data, t.size() * sizeof(float));
    *out = wrap(std::move(t));
  });
}

void sedn_tensor_destroy(sedn_tensor* t) { delete t; }
size_t sedn_tensor_rank(const sedn_tensor* t) { return t ? t->t.rank() : 0; }
size_t sedn_tensor_extent(const sedn_tensor* t, size_t axis) {
  return t && axis < t->t.rank() ? t->t.extent(axis) : 0;
}
size_t sedn_tensor_size(const sedn_tensor* t) { return t ? t->t.size() : 0; }
const float* sedn_tensor_data(const sedn_tensor* t) { return t ? t->t.raw() : nullptr; }
float* sedn_tensor_mutable_data(sedn_tensor* t) { return t ? t->t.raw() : nullptr; }

sedn_status sedn_pfm_read(const char* path, sedn_tensor** out, float* scale) {
  return guarded([&] {
    require(out != nullptr, "pfm_read: out is NULL");
    PfmImage img = read_pfm_file(path_arg(path, "path"));
    if (scale) *scale = img.scale;
    *out = wrap(std::move(img.data));
  });
}

sedn_status sedn_pfm_write(const char* path, const sedn_tensor* t, float scale) {
  return guarded([&] {
    require(t != nullptr, "pfm_write: tensor is NULL");
    write_pfm_file(path_arg(path, "path"), t->t, scale);
  });
}

sedn_status sedn_flo_read(const char* path, sedn_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "flo_read: out is NULL");
    *out = wrap(read_flo_file(path_arg(path, "path")));
  });
}

sedn_status sedn_flo_write(const char* path, const sedn_tensor* flow) {
  return guarded([&] {
    require(flow != nullptr, "flo_write: tensor is NULL");
    write_flo_file(path_arg(path, "path"), flow->t);
  });
}

sedn_status sedn_camera_load(const char* path, sedn_camera* out) {
  return guarded([&] {
    require(out != nullptr, "camera_load: out is NULL");
    const CameraIntrinsics c = load_camera_config(path_arg(path, "path")).intrinsics;
    *out = sedn_camera{c.fx, c.fy, c.cx, c.cy, c.baseline};
  });
}

sedn_status sedn_reconstruct(const sedn_tensor* u, const sedn_tensor* v, const sedn_tensor* d0,
                             const sedn_tensor* d1, const sedn_camera* camera, sedn_tensor** flow,
                             sedn_tensor** valid) {
  return guarded([&] {
    require(u && v && d0 && d1 && camera, "reconstruct: NULL input");
    require(flow && valid, "reconstruct: NULL output");
    SceneFlowField f = reconstruct_scene_flow(u->t, v->t, d0->t, d1->t, intrinsics_of(*camera));
    TensorF mask({f.height(), f.width()});
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = f.valid[i] ? 1.0f : 0.0f;
    sedn_tensor* fo = wrap(std::move(f.flow));
    *valid = wrap(std::move(mask));
    *flow = fo;
  });
}

sedn_status sedn_network_create(uint64_t seed, sedn_network** out) {
  return guarded([&] {
    require(out != nullptr, "network_create: out is NULL");
    *out = new sedn_network{build_network<float>(NetworkSpec::sceneednet(), seed)};
  });
}

sedn_status sedn_network_load(const char* path, sedn_network** out) {
  return guarded([&] {
    require(out != nullptr, "network_load: out is NULL");
    *out = new sedn_network{load_checkpoint(path_arg(path, "path")).network};
  });
}

sedn_status sedn_network_save(const sedn_network* net, const char* path) {
  return guarded([&] {
    require(net != nullptr, "network_save: network is NULL");
    save_checkpoint(path_arg(path, "path"), net->net);
  });
}

void sedn_network_destroy(sedn_network* net) { delete net; }

size_t sedn_network_parameter_count(const sedn_network* net) {
  return net ? net->net.parameter_count() : 0;
}

uint32_t sedn_network_epoch(const sedn_network* net) { return net ? net->net.epoch() : 0; }

sedn_status sedn_network_forward(const sedn_network* net, const sedn_tensor* input,
                                 sedn_tensor** out) {
  return guarded([&] {
    require(net && input && out, "network_forward: NULL argument");
    *out = wrap(forward(net->net, input->t));
  });
}

sedn_status sedn_layer_shapes(size_t height, size_t width, sedn_layer_shape* shapes,
                              size_t capacity, size_t* count) {
  return guarded([&] {
    require(count != nullptr, "layer_shapes: count is NULL");
    require(shapes != nullptr || capacity == 0, "layer_shapes: shapes is NULL");
    const NetworkSpec spec = NetworkSpec::sceneednet();
    const std::vector<LayerShape> all = layer_shapes(spec, height, width);
    for (std::size_t i = 0; i < all.size() && i < capacity; ++i) {
      sedn_layer_shape& s = shapes[i];
      std::memset(&s, 0, sizeof(s));
      std::strncpy(s.name, all[i].name.c_str(), sizeof(s.name) - 1);
      std::strncpy(s.kind, layer_kind_name(spec.layers[i].kind), sizeof(s.kind) - 1);
      s.channels = all[i].channels;
      s.height = all[i].height;
      s.width = all[i].width;
    }
    *count = all.size();
  });
}

sedn_status sedn_make_gt(const char* root, const char* camera, const char* out_dir,
                         size_t* written, size_t* failed) {
  return guarded([&] {
    const MakeGtReport r = make_ground_truth(path_arg(root, "root"), path_arg(camera, "camera"),
                                             path_arg(out_dir, "out"));
    if (written) *written = r.written;
    if (failed) *failed = r.failed;
  });
}

void sedn_train_options_init(sedn_train_options* o) {
  if (o == nullptr) return;
  const TrainConfig d;
  *o = sedn_train_options{};
  o->split = "train";
  o->val_split = "val";
  o->epochs = d.epochs;
  o->lr = d.lr0;
  o->momentum = d.momentum;
  o->has_decay = 0;
  o->decay = 0;
  o->batch = d.batch;
  o->seed = d.seed;
  o->checkpoint_every = d.checkpoint_every;
}

sedn_status sedn_train(const sedn_train_options* o, double* final_loss) {
  return guarded([&] {
    require(o != nullptr, "train: options is NULL");
    TrainJob job;
    job.root = path_arg(o->root, "root");
    job.camera = path_arg(o->camera, "camera");
    job.out_dir = path_arg(o->out_dir, "out");
    if (o->split && *o->split) job.split = o->split;
    if (o->val_root && *o->val_root) job.val_root = o->val_root;
    if (o->val_split && *o->val_split) job.val_split = o->val_split;
    job.config.epochs = o->epochs;
    job.config.lr0 = o->lr;
    job.config.momentum = o->momentum;
    if (o->has_decay) job.config.decay = o->decay;
    job.config.batch = o->batch;
    job.config.seed = o->seed;
    job.config.checkpoint_every = o->checkpoint_every;
    const FitResult r = run_training(job);
    if (final_loss) {
      *final_loss = r.train_loss.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : r.train_loss.back();
    }
  });
}

sedn_status sedn_infer(const char* checkpoint, const char* left_t, const char* right_t,
                       const char* left_t1, const char* right_t1, const char* out) {
  return guarded([&] {
    infer_to_file(path_arg(checkpoint, "checkpoint"), path_arg(left_t, "left-t"),
                  path_arg(right_t, "right-t"), path_arg(left_t1, "left-t1"),
                  path_arg(right_t1, "right-t1"), path_arg(out, "out"));
  });
}

sedn_status sedn_eval_checkpoint(const char* checkpoint, const char* root, const char* camera,
                                 const char* split, double* epe) {
  return guarded([&] {
    require(epe != nullptr, "eval: epe is NULL");
    *epe = evaluate_checkpoint(path_arg(checkpoint, "checkpoint"), path_arg(root, "root"),
                               path_arg(camera, "camera"),
                               split && *split ? std::string(split) : std::string("test"));
  });
}

sedn_status sedn_eval_dirs(const char* pred_dir, const char* gt_dir, double* epe) {
  return guarded([&] {
    require(epe != nullptr, "eval: epe is NULL");
    *epe = evaluate_directories(path_arg(pred_dir, "pred-dir"), path_arg(gt_dir, "gt-dir"));
  });
}

sedn_status sedn_colorize(const char* field, const char* valid, const char* out_prefix) {
  return guarded([&] {
    colorize_field(path_arg(field, "field"), path_arg(out_prefix, "out-prefix"),
                   valid && *valid ? std::filesystem::path(valid) : std::filesystem::path());
  });
}

}  // extern "C"
