#include "topsig/topsig.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "topsig/denoise.hpp"
#include "topsig/error.hpp"
#include "topsig/field_maps.hpp"
#include "topsig/mesh_io.hpp"
#include "topsig/operators.hpp"
#include "topsig/sampling.hpp"
#include "topsig/spectral.hpp"
#include "topsig/synthesis.hpp"
#include "topsig/version.hpp"

struct topsig_mesh {
    topsig::SimplicialComplex2 complex;
};

struct topsig_table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;
    std::vector<std::vector<double>> values;
};

namespace {

thread_local std::string g_last_error;

topsig_status fail(topsig_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
topsig_status guarded(Body&& body)
{
    try {
        g_last_error.clear();
        body();
        return TOPSIG_OK;
    } catch (const topsig::Error& e) {
        return fail(static_cast<topsig_status>(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(TOPSIG_ERR_NUMERICAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TOPSIG_ERR_NUMERICAL, e.what());
    }
}

void require(const void* ptr, const char* name)
{
    if (ptr == nullptr)
        throw topsig::ConfigError(std::string(name) + " must not be NULL");
}

topsig::MetricMode to_mode(topsig_metric_mode mode)
{
    switch (mode) {
    case TOPSIG_METRIC_LUMPED: return topsig::MetricMode::Lumped;
    case TOPSIG_METRIC_CONSISTENT_SOLVE: return topsig::MetricMode::ConsistentSolve;
    }
    throw topsig::ConfigError("unknown metric mode");
}

std::vector<topsig::Vec3> to_vectors(const double* data, std::size_t count)
{
    std::vector<topsig::Vec3> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = topsig::Vec3(data[3 * i], data[3 * i + 1], data[3 * i + 2]);
    return out;
}

void copy_vectors(const std::vector<topsig::Vec3>& in, double* out)
{
    for (std::size_t i = 0; i < in.size(); ++i)
        for (int k = 0; k < 3; ++k)
            out[3 * i + k] = in[i][k];
}

topsig_mesh* wrap(topsig::MeshData data)
{
    return new topsig_mesh{topsig::build_complex(std::move(data.points), data.triangles)};
}

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

struct TableBuilder {
    topsig_table* table;

    void text(const std::string& s)
    {
        table->cells.back().push_back(s);
        table->values.back().push_back(std::numeric_limits<double>::quiet_NaN());
    }
    template <class T>
    void number(T value)
    {
        if constexpr (std::is_floating_point_v<T>)
            table->cells.back().push_back(format_number(static_cast<double>(value)));
        else
            table->cells.back().push_back(std::to_string(value));
        table->values.back().push_back(static_cast<double>(value));
    }
    void row()
    {
        table->cells.emplace_back();
        table->values.emplace_back();
    }
};

topsig::SparseMatrix select_operator(const topsig::SimplicialComplex2& complex, topsig_operator op,
                                     topsig::MetricMode mode)
{
    if (op == TOPSIG_OP_B1)
        return complex.b1().cast<double>();
    if (op == TOPSIG_OP_B2)
        return complex.b2().cast<double>();
    const auto metrics = topsig::assemble_metrics(complex, mode);
    auto diag = [](const Eigen::VectorXd& d) {
        topsig::SparseMatrix m(d.size(), d.size());
        for (Eigen::Index i = 0; i < d.size(); ++i)
            m.insert(i, i) = d[i];
        return m;
    };
    switch (op) {
    case TOPSIG_OP_L1: return topsig::build_l1(complex, metrics).full;
    case TOPSIG_OP_L1_DOWN: return topsig::build_l1(complex, metrics).down;
    case TOPSIG_OP_L1_UP: return topsig::build_l1(complex, metrics).up;
    case TOPSIG_OP_L2: return topsig::build_l2(complex, metrics).full;
    case TOPSIG_OP_M0: return mode == topsig::MetricMode::Lumped ? diag(metrics.m0_lumped) : metrics.m0;
    case TOPSIG_OP_M1: return metrics.m1;
    case TOPSIG_OP_M2: return diag(metrics.m2);
    default: break;
    }
    throw topsig::ConfigError("unknown operator");
}

} // namespace

extern "C" {

const char* topsig_version(void) { return topsig::kVersion; }

const char* topsig_last_error(void) { return g_last_error.c_str(); }

topsig_status topsig_mesh_load(const char* path, topsig_mesh** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = wrap(topsig::read_mesh(path));
    });
}

topsig_status topsig_mesh_create(const double* positions, size_t n_points, const int32_t* triangles,
                                 size_t n_triangles, topsig_mesh** out)
{
    return guarded([&] {
        require(positions, "positions");
        require(triangles, "triangles");
        require(out, "out");
        topsig::MeshData data;
        data.points.positions = to_vectors(positions, n_points);
        data.triangles.resize(n_triangles);
        for (size_t t = 0; t < n_triangles; ++t)
            data.triangles[t] = {triangles[3 * t], triangles[3 * t + 1], triangles[3 * t + 2]};
        *out = wrap(std::move(data));
    });
}

topsig_status topsig_mesh_generate_torus(double major_radius, double minor_radius, int u_steps, int v_steps,
                                         int alternate_diagonals, topsig_mesh** out)
{
    return guarded([&] {
        require(out, "out");
        topsig::TorusSpec spec{major_radius, minor_radius, u_steps, v_steps, alternate_diagonals != 0};
        *out = wrap(topsig::make_torus(spec));
    });
}

topsig_status topsig_mesh_generate_spheroid(int subdivisions, double rx, double ry, double rz, topsig_mesh** out)
{
    return guarded([&] {
        require(out, "out");
        *out = wrap(topsig::make_spheroid(subdivisions, topsig::Vec3(rx, ry, rz)));
    });
}

void topsig_mesh_free(topsig_mesh* mesh) { delete mesh; }

topsig_status topsig_mesh_counts(const topsig_mesh* mesh, size_t* n_vertices, size_t* n_edges, size_t* n_triangles)
{
    return guarded([&] {
        require(mesh, "mesh");
        if (n_vertices)
            *n_vertices = mesh->complex.num_vertices();
        if (n_edges)
            *n_edges = mesh->complex.num_edges();
        if (n_triangles)
            *n_triangles = mesh->complex.num_triangles();
    });
}

topsig_status topsig_mesh_euler_characteristic(const topsig_mesh* mesh, long* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        *out = topsig::euler_characteristic(mesh->complex);
    });
}

topsig_status topsig_mesh_positions(const topsig_mesh* mesh, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        copy_vectors(mesh->complex.points().positions, out);
    });
}

topsig_status topsig_mesh_file_colors(const topsig_mesh* mesh, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        const auto& colors = mesh->complex.points().colors;
        if (!colors)
            throw topsig::ConfigError("mesh carries no color attributes");
        copy_vectors(*colors, out);
    });
}

topsig_status topsig_mesh_edges(const topsig_mesh* mesh, int32_t* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        const auto& edges = mesh->complex.edges();
        for (size_t e = 0; e < edges.size(); ++e) {
            out[2 * e] = edges[e][0];
            out[2 * e + 1] = edges[e][1];
        }
    });
}

topsig_status topsig_mesh_triangles(const topsig_mesh* mesh, int32_t* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        const auto& tris = mesh->complex.triangles();
        for (size_t t = 0; t < tris.size(); ++t)
            for (int k = 0; k < 3; ++k)
                out[3 * t + k] = tris[t][k];
    });
}

topsig_status topsig_mesh_face_normals(const topsig_mesh* mesh, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        copy_vectors(topsig::face_normals(mesh->complex), out);
    });
}

topsig_status topsig_mesh_write_ply(const topsig_mesh* mesh, const char* path, const double* colors,
                                    const double* face_normals, int binary)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(path, "path");
        const auto& c = mesh->complex;
        std::vector<topsig::Vec3> color_data, normal_data;
        topsig::PlyWriteOptions options;
        options.binary = binary != 0;
        if (colors) {
            color_data = to_vectors(colors, c.num_vertices());
            options.colors = std::span<const topsig::Vec3>(color_data);
        }
        if (face_normals) {
            normal_data = to_vectors(face_normals, c.num_triangles());
            options.face_normals = std::span<const topsig::Vec3>(normal_data);
        }
        topsig::write_ply(path, c.points(), c.source_triangles(), options);
    });
}

topsig_status topsig_coordinate_colors(const topsig_mesh* mesh, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        copy_vectors(topsig::assign_coordinate_colors(mesh->complex.points()).colors, out);
    });
}

topsig_status topsig_project_to_edges(const topsig_mesh* mesh, const double* field, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(field, "field");
        require(out, "out");
        const auto s = topsig::project_to_edges(to_vectors(field, mesh->complex.num_vertices()), mesh->complex);
        Eigen::Map<Eigen::VectorXd>(out, s.size()) = s;
    });
}

topsig_status topsig_color_roundtrip(const topsig_mesh* mesh, const double* field, int pseudoinverse, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(field, "field");
        require(out, "out");
        topsig::LiftOptions options;
        options.pseudoinverse_fallback = pseudoinverse != 0;
        copy_vectors(topsig::color_roundtrip(to_vectors(field, mesh->complex.num_vertices()), mesh->complex, options),
                     out);
    });
}

topsig_status topsig_operator_size(const topsig_mesh* mesh, topsig_operator op, size_t* rows, size_t* cols)
{
    return guarded([&] {
        require(mesh, "mesh");
        const auto& c = mesh->complex;
        size_t r = 0, k = 0;
        switch (op) {
        case TOPSIG_OP_L1:
        case TOPSIG_OP_L1_DOWN:
        case TOPSIG_OP_L1_UP:
        case TOPSIG_OP_M1: r = k = c.num_edges(); break;
        case TOPSIG_OP_L2:
        case TOPSIG_OP_M2: r = k = c.num_triangles(); break;
        case TOPSIG_OP_M0: r = k = c.num_vertices(); break;
        case TOPSIG_OP_B1: r = c.num_vertices(), k = c.num_edges(); break;
        case TOPSIG_OP_B2: r = c.num_edges(), k = c.num_triangles(); break;
        default: throw topsig::ConfigError("unknown operator");
        }
        if (rows)
            *rows = r;
        if (cols)
            *cols = k;
    });
}

topsig_status topsig_spectrum(const topsig_mesh* mesh, topsig_operator op, topsig_metric_mode mode, size_t k,
                              double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(out, "out");
        if (op != TOPSIG_OP_L1 && op != TOPSIG_OP_L1_DOWN && op != TOPSIG_OP_L1_UP && op != TOPSIG_OP_L2)
            throw topsig::ConfigError("spectrum is available for L1, L1 down, L1 up and L2 only");
        const auto matrix = select_operator(mesh->complex, op, to_mode(mode));
        const auto basis = topsig::spectral_basis(matrix, static_cast<Eigen::Index>(k));
        Eigen::Map<Eigen::VectorXd>(out, basis.size()) = basis.values;
    });
}

topsig_status topsig_export_matrix_market(const topsig_mesh* mesh, topsig_operator op, topsig_metric_mode mode,
                                          const char* path)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(path, "path");
        topsig::export_matrix_market(select_operator(mesh->complex, op, to_mode(mode)), path);
    });
}

topsig_status topsig_recover_colors(const topsig_mesh* mesh, const double* field, size_t n_samples, size_t bandwidth,
                                    int down_only, topsig_metric_mode mode, double* out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(field, "field");
        require(out, "out");
        const auto& c = mesh->complex;
        const auto metrics = topsig::assemble_metrics(c, to_mode(mode));
        const auto l1 = topsig::build_l1(c, metrics);
        const auto k = static_cast<Eigen::Index>(bandwidth ? bandwidth : topsig::default_bandwidth(n_samples));
        const auto basis = topsig::spectral_basis(down_only ? l1.down : l1.full, k);
        const auto model = topsig::BandlimitedModel::lowest(basis, k);
        const auto set = topsig::maxdet_select(model, n_samples);
        const auto signal = topsig::project_to_edges(to_vectors(field, c.num_vertices()), c);
        const auto rec = topsig::recover(topsig::sample(signal, set), set, model);
        topsig::LiftOptions lift;
        lift.pseudoinverse_fallback = true;
        copy_vectors(topsig::lift_to_vertices(topsig::whitney_reconstruct_barycenter(rec.signal, c), c, lift), out);
    });
}

topsig_status topsig_denoise_normals(const topsig_mesh* mesh, double snr_db, double lambda, double gamma,
                                     uint64_t seed, topsig_metric_mode mode, double* noisy_out, double* denoised_out)
{
    return guarded([&] {
        require(mesh, "mesh");
        const auto& c = mesh->complex;
        const auto l2 = topsig::build_l2(c, topsig::assemble_metrics(c, to_mode(mode)));
        const auto noisy = topsig::add_normal_noise(topsig::face_normals(c), snr_db, seed);
        topsig::DenoiseSettings settings;
        settings.lambda = lambda;
        settings.gamma = gamma;
        const auto result = topsig::denoise_normals(c, l2, noisy, settings);
        if (noisy_out)
            copy_vectors(noisy, noisy_out);
        if (denoised_out)
            copy_vectors(result.normals, denoised_out);
    });
}

topsig_status topsig_recovery_experiment(const topsig_mesh* mesh, const topsig_recovery_options* options,
                                         topsig_table** out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(options, "options");
        require(out, "out");
        if (options->n_grid == 0)
            throw topsig::ConfigError("empty sample-count grid");
        require(options->n_samples, "options->n_samples");
        const auto& c = mesh->complex;

        topsig::RecoveryExperimentOptions opts;
        opts.n_samples_grid.assign(options->n_samples, options->n_samples + options->n_grid);
        opts.bandwidth = static_cast<Eigen::Index>(options->bandwidth);
        if (options->max_bandwidth)
            opts.max_bandwidth = static_cast<Eigen::Index>(options->max_bandwidth);
        opts.variants.clear();
        if (options->include_full)
            opts.variants.push_back(topsig::LaplacianVariant::FullL1);
        if (options->include_down_only)
            opts.variants.push_back(topsig::LaplacianVariant::DownOnly);
        if (opts.variants.empty())
            throw topsig::ConfigError("no Laplacian variant selected");
        opts.seed = options->seed;
        opts.metric_mode = to_mode(options->metric_mode);
        opts.threads = options->threads;

        const auto field = options->field ? to_vectors(options->field, c.num_vertices())
                                          : topsig::assign_coordinate_colors(c.points()).colors;
        const auto rows = topsig::recovery_experiment(c, field, opts);

        auto table = std::make_unique<topsig_table>();
        table->columns = {"n_samples", "variant", "mse_mean_sq", "norm_error", "cond_estimate", "seed"};
        TableBuilder b{table.get()};
        for (const auto& r : rows) {
            b.row();
            b.number(r.n_samples);
            b.text(topsig::to_string(r.variant));
            b.number(r.mse_mean_sq);
            b.number(r.norm_error);
            b.number(r.cond_estimate);
            b.number(r.seed);
        }
        *out = table.release();
    });
}

topsig_status topsig_denoise_experiment(const topsig_mesh* mesh, const topsig_denoise_options* options,
                                        topsig_table** out)
{
    return guarded([&] {
        require(mesh, "mesh");
        require(options, "options");
        require(out, "out");
        if (options->n_snr == 0 || options->n_lambda == 0 || options->n_gamma == 0)
            throw topsig::ConfigError("SNR, lambda and gamma grids must be non-empty");
        require(options->snr_db, "options->snr_db");
        require(options->lambdas, "options->lambdas");
        require(options->gammas, "options->gammas");

        topsig::SnrExperimentOptions opts;
        opts.snr_grid.assign(options->snr_db, options->snr_db + options->n_snr);
        opts.lambdas.assign(options->lambdas, options->lambdas + options->n_lambda);
        opts.gammas.assign(options->gammas, options->gammas + options->n_gamma);
        opts.trials = options->trials;
        opts.seed = options->seed;
        opts.metric_mode = to_mode(options->metric_mode);
        opts.solver.data_term =
            options->unsquared_data_term ? topsig::DataTerm::Unsquared : topsig::DataTerm::Squared;
        if (options->max_iterations > 0)
            opts.solver.max_iterations = options->max_iterations;
        opts.threads = options->threads;

        const auto rows = topsig::snr_experiment(mesh->complex, opts);
        auto table = std::make_unique<topsig_table>();
        table->columns = {"snr_db", "lambda", "gamma", "trial", "mse", "iterations", "converged"};
        TableBuilder b{table.get()};
        for (const auto& r : rows) {
            b.row();
            b.number(r.snr_db);
            b.number(r.lambda);
            b.number(r.gamma);
            b.number(r.trial);
            b.number(r.mse);
            b.number(r.iterations);
            b.number(r.converged ? 1 : 0);
        }
        *out = table.release();
    });
}

size_t topsig_table_rows(const topsig_table* table) { return table ? table->cells.size() : 0; }

size_t topsig_table_columns(const topsig_table* table) { return table ? table->columns.size() : 0; }

const char* topsig_table_column_name(const topsig_table* table, size_t column)
{
    if (!table || column >= table->columns.size())
        return nullptr;
    return table->columns[column].c_str();
}

const char* topsig_table_cell(const topsig_table* table, size_t row, size_t column)
{
    if (!table || row >= table->cells.size() || column >= table->columns.size())
        return nullptr;
    return table->cells[row][column].c_str();
}

double topsig_table_value(const topsig_table* table, size_t row, size_t column)
{
    if (!table || row >= table->values.size() || column >= table->columns.size())
        return std::numeric_limits<double>::quiet_NaN();
    return table->values[row][column];
}

void topsig_table_free(topsig_table* table) { delete table; }

} // extern "C"
