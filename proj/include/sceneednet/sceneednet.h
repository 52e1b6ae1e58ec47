/* Copyright 2026 The SceneEDNet Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the SceneEDNet scene-flow library.
 *
 * Every fallible call returns a sedn_status. On failure a description is
 * available from sedn_last_error() until the next call on the same thread.
 * Objects are opaque handles released with their *_destroy function;
 * destroying NULL is a no-op. Output handles are only written on success.
 */

#ifndef SCENEEDNET_SCENEEDNET_H_
#define SCENEEDNET_SCENEEDNET_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SEDN_BUILDING_LIBRARY)
#define SEDN_API __declspec(dllexport)
#else
#define SEDN_API __declspec(dllimport)
#endif
#else
#define SEDN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sedn_status {
  SEDN_OK = 0,
  SEDN_ERR_INVALID_ARGUMENT = 1,
  SEDN_ERR_SHAPE = 2,
  SEDN_ERR_PARSE = 3,
  SEDN_ERR_IO = 4,
  SEDN_ERR_DATA = 5,
  SEDN_ERR_NUMERIC = 6,
  SEDN_ERR_INTERNAL = 7
} sedn_status;

/* Message of the last failed call on this thread ("" if none). */
SEDN_API const char* sedn_last_error(void);
SEDN_API const char* sedn_status_name(sedn_status status);
SEDN_API const char* sedn_version(void);

/* Log messages from long-running calls. level: 0 info, 1 warning. Passing
 * NULL restores the default (warnings and info on stderr). */
typedef void (*sedn_log_fn)(int level, const char* message, void* user);
SEDN_API void sedn_set_log_callback(sedn_log_fn fn, void* user);

/* ---- tensors: float32, row-major ---------------------------------------- */

typedef struct sedn_tensor sedn_tensor;

/* `data` may be NULL for a zero-filled tensor. */
SEDN_API sedn_status sedn_tensor_create(const size_t* shape, size_t rank, const float* data,
                                        sedn_tensor** out);
SEDN_API void sedn_tensor_destroy(sedn_tensor* t);
SEDN_API size_t sedn_tensor_rank(const sedn_tensor* t);
/* Extent of `axis`, or 0 when out of range. */
SEDN_API size_t sedn_tensor_extent(const sedn_tensor* t, size_t axis);
SEDN_API size_t sedn_tensor_size(const sedn_tensor* t);
SEDN_API const float* sedn_tensor_data(const sedn_tensor* t);
SEDN_API float* sedn_tensor_mutable_data(sedn_tensor* t);

/* ---- raster formats ------------------------------------------------------ */

/* [C,H,W] with C = 1 or 3, top row first. `scale` may be NULL. */
SEDN_API sedn_status sedn_pfm_read(const char* path, sedn_tensor** out, float* scale);
/* Negative scale writes little-endian samples, positive big-endian. */
SEDN_API sedn_status sedn_pfm_write(const char* path, const sedn_tensor* t, float scale);
/* [2,H,W]: u then v. */
SEDN_API sedn_status sedn_flo_read(const char* path, sedn_tensor** out);
SEDN_API sedn_status sedn_flo_write(const char* path, const sedn_tensor* flow);

/* ---- geometry ------------------------------------------------------------ */

typedef struct sedn_camera {
  double fx, fy, cx, cy, baseline;
} sedn_camera;

SEDN_API sedn_status sedn_camera_load(const char* path, sedn_camera* out);

/* u, v, d0, d1 are [H,W]; d1 is the disparity raster of frame t+1. Returns
 * the [3,H,W] scene flow and a [H,W] mask holding 1 or 0. */
SEDN_API sedn_status sedn_reconstruct(const sedn_tensor* u, const sedn_tensor* v,
                                      const sedn_tensor* d0, const sedn_tensor* d1,
                                      const sedn_camera* camera, sedn_tensor** flow,
                                      sedn_tensor** valid);

/* ---- network ------------------------------------------------------------- */

typedef struct sedn_network sedn_network;

typedef struct sedn_layer_shape {
  char name[32];
  char kind[16];
  size_t channels, height, width;
} sedn_layer_shape;

SEDN_API sedn_status sedn_network_create(uint64_t seed, sedn_network** out);
SEDN_API sedn_status sedn_network_load(const char* path, sedn_network** out);
SEDN_API sedn_status sedn_network_save(const sedn_network* net, const char* path);
SEDN_API void sedn_network_destroy(sedn_network* net);
SEDN_API size_t sedn_network_parameter_count(const sedn_network* net);
SEDN_API uint32_t sedn_network_epoch(const sedn_network* net);
/* input [12,H,W] -> output [3,H,W]. */
SEDN_API sedn_status sedn_network_forward(const sedn_network* net, const sedn_tensor* input,
                                          sedn_tensor** out);
/* Per-layer output shapes for an h x w input. Writes up to `capacity`
 * entries and the total into `count`. */
SEDN_API sedn_status sedn_layer_shapes(size_t height, size_t width, sedn_layer_shape* shapes,
                                       size_t capacity, size_t* count);

/* ---- workflows ----------------------------------------------------------- */

/* Ground truth for every split under `root`; see the README for the layout. */
SEDN_API sedn_status sedn_make_gt(const char* root, const char* camera, const char* out_dir,
                                  size_t* written, size_t* failed);

typedef struct sedn_train_options {
  const char* root;
  const char* camera;
  const char* out_dir;
  const char* split;     /* default "train" */
  const char* val_root;  /* NULL: no validation */
  const char* val_split; /* default "val" */
  uint32_t epochs;
  double lr;
  double momentum;
  int has_decay; /* 0: decay = lr / epochs */
  double decay;
  size_t batch;
  uint64_t seed;
  uint32_t checkpoint_every; /* 0: final checkpoint only */
} sedn_train_options;

/* Fills defaults: 100 epochs, lr 1e-5, momentum 0.5, batch 1, seed 0. */
SEDN_API void sedn_train_options_init(sedn_train_options* options);
/* `final_loss` (may be NULL) receives the last epoch's training loss, or NaN
 * when no epoch ran. */
SEDN_API sedn_status sedn_train(const sedn_train_options* options, double* final_loss);

SEDN_API sedn_status sedn_infer(const char* checkpoint, const char* left_t, const char* right_t,
                                const char* left_t1, const char* right_t1, const char* out);
SEDN_API sedn_status sedn_eval_checkpoint(const char* checkpoint, const char* root,
                                          const char* camera, const char* split, double* epe);
SEDN_API sedn_status sedn_eval_dirs(const char* pred_dir, const char* gt_dir, double* epe);
/* `valid` may be NULL. */
SEDN_API sedn_status sedn_colorize(const char* field, const char* valid, const char* out_prefix);

#ifdef __cplusplus
}
#endif

#endif /* SCENEEDNET_SCENEEDNET_H_ */
