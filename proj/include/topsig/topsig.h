/*
 * C interface of the topsig library: point clouds as oriented simplicial
 * complexes, Whitney-weighted Hodge Laplacians, edge-signal color recovery
 * and triangle-normal denoising.
 *
 * Every function returns a topsig_status; on failure a message is available
 * from topsig_last_error() on the calling thread. Handles are opaque and
 * owned by the caller (release with the matching *_free function).
 */
#ifndef TOPSIG_H
#define TOPSIG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TOPSIG_BUILDING_LIBRARY)
#    define TOPSIG_API __declspec(dllexport)
#  else
#    define TOPSIG_API __declspec(dllimport)
#  endif
#else
#  define TOPSIG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Nonzero values double as CLI exit codes. */
typedef enum topsig_status {
    TOPSIG_OK = 0,
    TOPSIG_ERR_CONFIG = 2,
    TOPSIG_ERR_IO = 3,
    TOPSIG_ERR_MESH = 4,
    TOPSIG_ERR_NUMERICAL = 5
} topsig_status;

typedef enum topsig_metric_mode {
    TOPSIG_METRIC_LUMPED = 0,
    TOPSIG_METRIC_CONSISTENT_SOLVE = 1
} topsig_metric_mode;

typedef enum topsig_operator {
    TOPSIG_OP_L1 = 0,
    TOPSIG_OP_L1_DOWN = 1,
    TOPSIG_OP_L1_UP = 2,
    TOPSIG_OP_L2 = 3,
    TOPSIG_OP_B1 = 4,
    TOPSIG_OP_B2 = 5,
    TOPSIG_OP_M0 = 6,
    TOPSIG_OP_M1 = 7,
    TOPSIG_OP_M2 = 8
} topsig_operator;

typedef struct topsig_mesh topsig_mesh;   /* validated simplicial complex */
typedef struct topsig_table topsig_table; /* experiment result rows */

TOPSIG_API const char* topsig_version(void);
TOPSIG_API const char* topsig_last_error(void);

/* ---- meshes ------------------------------------------------------------ */

/* Loads a .ply or .obj file and validates it as a simplicial complex. */
TOPSIG_API topsig_status topsig_mesh_load(const char* path, topsig_mesh** out);

/* Builds a complex from raw arrays: positions is 3*n_points doubles,
 * triangles 3*n_triangles vertex indices (winding preserved). */
TOPSIG_API topsig_status topsig_mesh_create(const double* positions, size_t n_points, const int32_t* triangles,
                                            size_t n_triangles, topsig_mesh** out);

TOPSIG_API topsig_status topsig_mesh_generate_torus(double major_radius, double minor_radius, int u_steps,
                                                    int v_steps, int alternate_diagonals, topsig_mesh** out);

TOPSIG_API topsig_status topsig_mesh_generate_spheroid(int subdivisions, double rx, double ry, double rz,
                                                       topsig_mesh** out);

TOPSIG_API void topsig_mesh_free(topsig_mesh* mesh);

TOPSIG_API topsig_status topsig_mesh_counts(const topsig_mesh* mesh, size_t* n_vertices, size_t* n_edges,
                                            size_t* n_triangles);
TOPSIG_API topsig_status topsig_mesh_euler_characteristic(const topsig_mesh* mesh, long* out);

/* Copies 3*N positions. */
TOPSIG_API topsig_status topsig_mesh_positions(const topsig_mesh* mesh, double* out);
/* Copies the 3*N colors read from the input file; TOPSIG_ERR_CONFIG if the file had none. */
TOPSIG_API topsig_status topsig_mesh_file_colors(const topsig_mesh* mesh, double* out);
/* Copies 2*E canonical edges (lower vertex first). */
TOPSIG_API topsig_status topsig_mesh_edges(const topsig_mesh* mesh, int32_t* out);
/* Copies 3*T triangle vertex indices in canonical (ascending) order. */
TOPSIG_API topsig_status topsig_mesh_triangles(const topsig_mesh* mesh, int32_t* out);
/* Copies 3*T unit normals from the source winding. */
TOPSIG_API topsig_status topsig_mesh_face_normals(const topsig_mesh* mesh, double* out);

/* colors: optional 3*N values in [0,1]; normals: optional 3*T values. */
TOPSIG_API topsig_status topsig_mesh_write_ply(const topsig_mesh* mesh, const char* path, const double* colors,
                                               const double* face_normals, int binary);

/* ---- signals and operators --------------------------------------------- */

/* R,G,B = normalised x,y,z coordinates; 3*N values. */
TOPSIG_API topsig_status topsig_coordinate_colors(const topsig_mesh* mesh, double* out);

/* Edge projection of a 3*N vertex field; writes E values. */
TOPSIG_API topsig_status topsig_project_to_edges(const topsig_mesh* mesh, const double* field, double* out);

/* Vertex field -> edges -> Whitney barycenter vectors -> least-squares vertex
 * lift. pseudoinverse != 0 enables the minimum-norm fallback. */
TOPSIG_API topsig_status topsig_color_roundtrip(const topsig_mesh* mesh, const double* field, int pseudoinverse,
                                                double* out);

/* The k smallest eigenvalues of an operator (k = 0: all). out holds k values
 * (or the operator dimension when k = 0). Only L1, L1_DOWN, L1_UP, L2. */
TOPSIG_API topsig_status topsig_spectrum(const topsig_mesh* mesh, topsig_operator op, topsig_metric_mode mode,
                                         size_t k, double* out);

/* Dimension of the requested operator. */
TOPSIG_API topsig_status topsig_operator_size(const topsig_mesh* mesh, topsig_operator op, size_t* rows,
                                              size_t* cols);

TOPSIG_API topsig_status topsig_export_matrix_market(const topsig_mesh* mesh, topsig_operator op,
                                                     topsig_metric_mode mode, const char* path);

/* Samples the edge signal of `field` on n_samples MaxDet edges of the lowest
 * `bandwidth` eigenvectors (of L1 when down_only == 0, else L1 down),
 * recovers it, and lifts it back to 3*N vertex colors. */
TOPSIG_API topsig_status topsig_recover_colors(const topsig_mesh* mesh, const double* field, size_t n_samples,
                                               size_t bandwidth, int down_only, topsig_metric_mode mode,
                                               double* out);

/* Adds Gaussian noise at snr_db, denoises with (lambda, gamma), writes 3*T
 * noisy and 3*T denoised unit normals (either output may be NULL). */
TOPSIG_API topsig_status topsig_denoise_normals(const topsig_mesh* mesh, double snr_db, double lambda, double gamma,
                                                uint64_t seed, topsig_metric_mode mode, double* noisy_out,
                                                double* denoised_out);

/* ---- experiments -------------------------------------------------------- */

typedef struct topsig_recovery_options {
    const size_t* n_samples; /* grid of sample counts */
    size_t n_grid;
    size_t bandwidth;        /* 0: half the sample count capped at max_bandwidth */
    size_t max_bandwidth;    /* 0: 400 */
    int include_full;        /* run the full-L1 variant */
    int include_down_only;   /* run the L1-down-only variant */
    const double* field;     /* 3*N vertex colors; NULL: coordinate colors */
    topsig_metric_mode metric_mode;
    uint64_t seed;
    unsigned threads;        /* 0: hardware concurrency */
} topsig_recovery_options;

/* Columns: n_samples, variant, mse_mean_sq, norm_error, cond_estimate, seed. */
TOPSIG_API topsig_status topsig_recovery_experiment(const topsig_mesh* mesh, const topsig_recovery_options* options,
                                                    topsig_table** out);

typedef struct topsig_denoise_options {
    const double* snr_db;
    size_t n_snr;
    const double* lambdas;
    size_t n_lambda;
    const double* gammas;
    size_t n_gamma;
    int trials;
    uint64_t seed;
    topsig_metric_mode metric_mode;
    int unsquared_data_term;
    int max_iterations; /* 0: 20000 */
    unsigned threads;
} topsig_denoise_options;

/* Columns: snr_db, lambda, gamma, trial, mse, iterations, converged. */
TOPSIG_API topsig_status topsig_denoise_experiment(const topsig_mesh* mesh, const topsig_denoise_options* options,
                                                   topsig_table** out);

TOPSIG_API size_t topsig_table_rows(const topsig_table* table);
TOPSIG_API size_t topsig_table_columns(const topsig_table* table);
TOPSIG_API const char* topsig_table_column_name(const topsig_table* table, size_t column);
/* Cells are preformatted text (round-trip exact for floating point). */
TOPSIG_API const char* topsig_table_cell(const topsig_table* table, size_t row, size_t column);
/* Numeric value of a cell; NaN for text cells. */
TOPSIG_API double topsig_table_value(const topsig_table* table, size_t row, size_t column);
TOPSIG_API void topsig_table_free(topsig_table* table);

#ifdef __cplusplus
}
#endif

#endif /* TOPSIG_H */
