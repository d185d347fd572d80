/*
 * SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MULTISCOPIC_MULTISCOPIC_H
#define MULTISCOPIC_MULTISCOPIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MULTISCOPIC_BUILDING)
#define MS_API __declspec(dllexport)
#else
#define MS_API __declspec(dllimport)
#endif
#else
#define MS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ms_status {
    MS_OK = 0,
    MS_ERROR_ARGUMENT = 1,
    MS_ERROR_FORMAT = 2,
    MS_ERROR_IO = 3,
    MS_ERROR_INTERNAL = 4
} ms_status;

typedef enum ms_view { MS_VIEW_LEFT = 0, MS_VIEW_RIGHT = 1, MS_VIEW_TOP = 2, MS_VIEW_BOTTOM = 3 } ms_view;

typedef enum ms_fusion { MS_FUSION_MEAN = 0, MS_FUSION_MIN = 1, MS_FUSION_HEURISTIC = 2 } ms_fusion;

typedef struct ms_image ms_image;
typedef struct ms_disparity ms_disparity;
typedef struct ms_set ms_set;
typedef struct ms_scene ms_scene;
typedef struct ms_render ms_render;

/* Message of the last failed call on this thread; never NULL. */
MS_API const char* ms_last_error(void);
MS_API const char* ms_version(void);

/* Images: 8-bit, 1 or 3 channels, row-major interleaved. */
MS_API ms_status ms_image_load(const char* path, ms_image** out);
MS_API ms_status ms_image_save(const ms_image* image, const char* path);
MS_API ms_status ms_image_create(int width, int height, int channels, const uint8_t* data, ms_image** out);
MS_API int ms_image_width(const ms_image* image);
MS_API int ms_image_height(const ms_image* image);
MS_API int ms_image_channels(const ms_image* image);
/* Borrowed pointer to width*height*channels bytes, valid until the image is freed. */
MS_API const uint8_t* ms_image_data(const ms_image* image);
MS_API void ms_image_free(ms_image* image);

/* Disparity maps. Paths ending in .pfm store floats (scale ignored);
 * anything else is an 8-bit PGM holding round(d * scale), 0 = invalid. */
MS_API ms_status ms_disparity_load(const char* path, double scale, ms_disparity** out);
MS_API ms_status ms_disparity_save(const ms_disparity* map, const char* path, double scale);
MS_API int ms_disparity_width(const ms_disparity* map);
MS_API int ms_disparity_height(const ms_disparity* map);
/* Returns 1 and stores the value when the cell is valid, else 0. */
MS_API int ms_disparity_get(const ms_disparity* map, int x, int y, float* value);
MS_API ms_status ms_disparity_colorize(const ms_disparity* map, double d_max, ms_image** out);
MS_API void ms_disparity_free(ms_disparity* map);

/* Multiscopic sets. Images are copied. */
MS_API ms_status ms_set_create(const ms_image* center, ms_set** out);
MS_API ms_status ms_set_add_view(ms_set* set, ms_view view, const ms_image* image);
MS_API int ms_set_view_count(const ms_set* set);
/* 1 when every surrounding view lies within tolerance pixels of its axis. */
MS_API ms_status ms_set_rectify_check(const ms_set* set, double tolerance, int* aligned);
MS_API void ms_set_free(ms_set* set);

typedef struct ms_bm_params {
    int block_size;
    int d_min;
    int d_max;
    ms_fusion fusion;
    double heuristic_ratio;
    int subpixel;
} ms_bm_params;

MS_API ms_bm_params ms_bm_params_default(void);
MS_API ms_status ms_match_bm(const ms_set* set, const ms_bm_params* params, ms_disparity** out);
/* Fused SAD volume dump. */
MS_API ms_status ms_bm_dump_volume(const ms_set* set, const ms_bm_params* params, const char* path);

typedef struct ms_gc_params {
    double occlusion_penalty;
    double lambda1;
    double lambda2;
    double theta;
    int d_cutoff;
    int d_min;
    int d_max;
    int upscale;
    int max_sweeps;
    uint64_t seed;
    ms_fusion fusion;
    double heuristic_ratio;
    int bt_literal;
    int energy_scale;
} ms_gc_params;

typedef struct ms_gc_stats {
    int sweeps;
    int moves;
    int energy_violations;
    /* In intensity units. */
    double initial_energy;
    double final_energy;
} ms_gc_stats;

MS_API ms_gc_params ms_gc_params_default(void);
/* stats may be NULL. */
MS_API ms_status ms_match_gc(const ms_set* set, const ms_gc_params* params, ms_disparity** out,
                             ms_gc_stats* stats);
/* Fused pixelwise dissimilarity volume dump (set resolution). */
MS_API ms_status ms_gc_dump_volume(const ms_set* set, const ms_gc_params* params, const char* path);

/* Synthetic scenes. */
MS_API ms_status ms_scene_default(ms_scene** out);
MS_API ms_status ms_scene_load(const char* path, ms_scene** out);
MS_API ms_status ms_scene_reseed(ms_scene* scene, uint32_t seed);
MS_API void ms_scene_free(ms_scene* scene);

MS_API ms_status ms_scene_render(const ms_scene* scene, const ms_view* views, int view_count, int baseline_units,
                                 ms_render** out);
/* Borrowed handles, valid until the render is freed. */
MS_API const ms_set* ms_render_set(const ms_render* render);
MS_API const ms_image* ms_render_center(const ms_render* render);
/* NULL when the view was not rendered. */
MS_API const ms_image* ms_render_view(const ms_render* render, ms_view view);
MS_API const ms_disparity* ms_render_ground_truth(const ms_render* render);
MS_API const ms_image* ms_render_occlusion(const ms_render* render);
MS_API void ms_render_free(ms_render* render);

typedef struct ms_report {
    double rms;
    double avg_err;
    double bad05;
    double bad1;
    double bad2;
    size_t evaluated;
    size_t excluded;
    size_t invalid_estimates;
} ms_report;

MS_API ms_status ms_evaluate(const ms_disparity* estimate, const ms_disparity* ground_truth, ms_report* out);
/* Percent decrease from baseline to candidate; 0 (and *value untouched)
 * when the baseline metric is zero. metric: 0 rms, 1 avg_err, 2 bad05,
 * 3 bad1, 4 bad2. */
MS_API int ms_improvement(const ms_report* baseline, const ms_report* candidate, int metric, double* value);
/* Writes the text table, key=value lines or improvement lines into buf
 * (NUL-terminated, truncated to size). Returns the full length. */
MS_API size_t ms_report_format(const ms_report* report, int key_values, char* buf, size_t size);
MS_API size_t ms_improvement_format(const ms_report* baseline, const ms_report* candidate, char* buf,
                                    size_t size);

#ifdef __cplusplus
}
#endif

#endif
