// Command-line front end over the topsig C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "topsig/topsig.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure {
    topsig_status status;
    std::string message;
};

void check(topsig_status status)
{
    if (status != TOPSIG_OK)
        throw Failure{status, topsig_last_error()};
}

[[noreturn]] void config_error(const std::string& message) { throw Failure{TOPSIG_ERR_CONFIG, message}; }

struct MeshDeleter {
    void operator()(topsig_mesh* m) const { topsig_mesh_free(m); }
};
struct TableDeleter {
    void operator()(topsig_table* t) const { topsig_table_free(t); }
};
using MeshPtr = std::unique_ptr<topsig_mesh, MeshDeleter>;
using TablePtr = std::unique_ptr<topsig_table, TableDeleter>;

struct Counts {
    size_t n = 0, e = 0, t = 0;
    long chi = 0;
};

Counts counts(const topsig_mesh* mesh)
{
    Counts c;
    check(topsig_mesh_counts(mesh, &c.n, &c.e, &c.t));
    check(topsig_mesh_euler_characteristic(mesh, &c.chi));
    return c;
}

// "a:b:step" (inclusive) or "a,b,c".
template <class T>
std::vector<T> parse_grid(const std::string& text, const char* what)
{
    auto number = [&](const std::string& s) -> T {
        try {
            size_t used = 0;
            T value;
            if constexpr (std::is_integral_v<T>) {
                if (!s.empty() && s[0] == '-')
                    throw std::invalid_argument("negative");
                value = static_cast<T>(std::stoull(s, &used));
            } else {
                value = static_cast<T>(std::stod(s, &used));
            }
            if (used != s.size())
                throw std::invalid_argument("trailing");
            return value;
        } catch (const std::exception&) {
            config_error(std::string("invalid ") + what + " value '" + s + "'");
        }
    };
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    while (std::getline(ss, item, sep))
        parts.push_back(item);
    std::vector<T> out;
    if (sep == ':') {
        if (parts.size() != 3)
            config_error(std::string(what) + " range must be start:stop:step");
        const T start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
        if (!(step > 0) || stop < start)
            config_error(std::string(what) + " range needs step > 0 and stop >= start");
        const auto count = static_cast<size_t>(std::floor((stop - start) / static_cast<double>(step) + 1e-9)) + 1;
        for (size_t i = 0; i < count; ++i)
            out.push_back(static_cast<T>(start + static_cast<T>(i) * step));
    } else {
        for (const auto& p : parts)
            out.push_back(number(p));
    }
    if (out.empty())
        config_error(std::string(what) + " grid is empty");
    return out;
}

topsig_metric_mode metric_mode(const std::string& name)
{
    if (name == "lumped")
        return TOPSIG_METRIC_LUMPED;
    if (name == "consistent-solve" || name == "consistent")
        return TOPSIG_METRIC_CONSISTENT_SOLVE;
    config_error("unknown metric mode '" + name + "'");
}

topsig_operator operator_from(const std::string& name)
{
    static const std::pair<const char*, topsig_operator> table[] = {
        {"L1", TOPSIG_OP_L1}, {"L1-down", TOPSIG_OP_L1_DOWN}, {"L1-up", TOPSIG_OP_L1_UP}, {"L2", TOPSIG_OP_L2},
        {"B1", TOPSIG_OP_B1}, {"B2", TOPSIG_OP_B2},           {"M0", TOPSIG_OP_M0},       {"M1", TOPSIG_OP_M1},
        {"M2", TOPSIG_OP_M2}};
    for (const auto& [key, op] : table)
        if (name == key)
            return op;
    config_error("unknown operator '" + name + "'");
}

// FNV-1a over the canonical JSON text of the config.
std::string config_hash(const json& config)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : config.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- mesh source -----------------------------------------------------------

struct SourceArgs {
    std::string input;
    std::string generate;
    double major = 2.0, minor = 0.7;
    int u_steps = 30, v_steps = 20;
    bool alternate = false;
    int subdivisions = 3;
    std::vector<double> radii{1.0, 1.0, 0.6};
};

void add_source_options(CLI::App* cmd, SourceArgs& args, bool positional)
{
    if (positional)
        cmd->add_option("input", args.input, "Input mesh (.ply or .obj)");
    else
        cmd->add_option("--input,-i", args.input, "Input mesh (.ply or .obj)");
    cmd->add_option("--generate", args.generate, "Synthetic mesh instead of a file")
        ->check(CLI::IsMember({"torus", "spheroid"}));
    cmd->add_option("--major-radius", args.major, "Torus major radius")->capture_default_str();
    cmd->add_option("--minor-radius", args.minor, "Torus minor radius")->capture_default_str();
    cmd->add_option("--u-steps", args.u_steps, "Torus steps around the major circle")->capture_default_str();
    cmd->add_option("--v-steps", args.v_steps, "Torus steps around the minor circle")->capture_default_str();
    cmd->add_flag("--alternate-diagonals", args.alternate, "Alternate the torus quad diagonals");
    cmd->add_option("--subdivisions", args.subdivisions, "Spheroid subdivision level (0-7)")->capture_default_str();
    cmd->add_option("--radii", args.radii, "Spheroid radii x y z")->expected(3)->capture_default_str();
}

json source_config(const SourceArgs& args)
{
    if (args.input.empty() == args.generate.empty())
        config_error("give exactly one of an input mesh or --generate");
    if (!args.input.empty())
        return {{"input", args.input}};
    if (args.generate == "torus")
        return {{"generate", "torus"},
                {"major_radius", args.major},
                {"minor_radius", args.minor},
                {"u_steps", args.u_steps},
                {"v_steps", args.v_steps},
                {"alternate_diagonals", args.alternate}};
    return {{"generate", "spheroid"}, {"subdivisions", args.subdivisions}, {"radii", args.radii}};
}

MeshPtr open_mesh(const json& source)
{
    topsig_mesh* mesh = nullptr;
    if (source.contains("input")) {
        check(topsig_mesh_load(source["input"].get<std::string>().c_str(), &mesh));
    } else if (source["generate"] == "torus") {
        check(topsig_mesh_generate_torus(source["major_radius"], source["minor_radius"], source["u_steps"],
                                         source["v_steps"], source["alternate_diagonals"].get<bool>() ? 1 : 0,
                                         &mesh));
    } else {
        const auto radii = source["radii"].get<std::vector<double>>();
        check(topsig_mesh_generate_spheroid(source["subdivisions"], radii.at(0), radii.at(1), radii.at(2), &mesh));
    }
    return MeshPtr(mesh);
}

// ---- outputs ---------------------------------------------------------------

fs::path prepare_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Failure{TOPSIG_ERR_IO, "cannot create output directory '" + dir + "': " + ec.message()};
    return fs::path(dir);
}

void write_csv(const fs::path& path, const topsig_table* table, const std::string& hash)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Failure{TOPSIG_ERR_IO, "cannot write " + path.string()};
    const size_t cols = topsig_table_columns(table);
    for (size_t c = 0; c < cols; ++c)
        out << topsig_table_column_name(table, c) << ',';
    out << "config_hash\n";
    for (size_t r = 0; r < topsig_table_rows(table); ++r) {
        for (size_t c = 0; c < cols; ++c)
            out << topsig_table_cell(table, r, c) << ',';
        out << hash << '\n';
    }
    if (!out)
        throw Failure{TOPSIG_ERR_IO, "failed writing " + path.string()};
}

void write_manifest(const fs::path& path, const json& config, const topsig_mesh* mesh,
                    const std::vector<std::string>& artifacts)
{
    const Counts c = counts(mesh);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json manifest = {{"config", config},
                     {"config_hash", config_hash(config)},
                     {"version", topsig_version()},
                     {"mesh", {{"N", c.n}, {"E", c.e}, {"T", c.t}, {"chi", c.chi}}},
                     {"artifacts", artifacts},
                     {"timestamp", stamp}};
    std::ofstream out(path);
    if (!out)
        throw Failure{TOPSIG_ERR_IO, "cannot write " + path.string()};
    out << manifest.dump(2) << '\n';
}

std::vector<double> coordinate_colors(const topsig_mesh* mesh)
{
    const Counts c = counts(mesh);
    std::vector<double> colors(3 * c.n);
    check(topsig_coordinate_colors(mesh, colors.data()));
    return colors;
}

// ---- commands (each driven entirely by its config object) ------------------

json run_generate(const json& config)
{
    auto mesh = open_mesh(config["source"]);
    const fs::path out = config["output"].get<std::string>();
    if (out.has_parent_path())
        prepare_dir(out.parent_path().string());
    const auto colors = coordinate_colors(mesh.get());
    std::vector<double> normals(3 * counts(mesh.get()).t);
    check(topsig_mesh_face_normals(mesh.get(), normals.data()));
    check(topsig_mesh_write_ply(mesh.get(), out.string().c_str(), colors.data(), normals.data(),
                                config["binary"].get<bool>() ? 1 : 0));
    const Counts c = counts(mesh.get());
    std::cout << "wrote " << out.string() << " (N=" << c.n << ", E=" << c.e << ", T=" << c.t << ", chi=" << c.chi
              << ")\n";
    return json::array({out.string()});
}

json run_recover(const json& config)
{
    auto mesh = open_mesh(config["source"]);
    const fs::path dir = prepare_dir(config["output_dir"]);
    const auto grid = config["n_samples"].get<std::vector<size_t>>();
    const auto variants = config["variants"].get<std::vector<std::string>>();

    std::vector<double> field;
    if (config["colors"] == "file") {
        field.resize(3 * counts(mesh.get()).n);
        check(topsig_mesh_file_colors(mesh.get(), field.data()));
    }

    topsig_recovery_options opts{};
    opts.n_samples = grid.data();
    opts.n_grid = grid.size();
    opts.bandwidth = config["bandwidth"];
    opts.max_bandwidth = config["max_bandwidth"];
    for (const auto& v : variants) {
        opts.include_full |= v == "full_L1";
        opts.include_down_only |= v == "down_only";
    }
    opts.field = field.empty() ? nullptr : field.data();
    opts.metric_mode = metric_mode(config["metric_mode"]);
    opts.seed = config["seed"];
    opts.threads = config["threads"];

    topsig_table* raw = nullptr;
    check(topsig_recovery_experiment(mesh.get(), &opts, &raw));
    TablePtr table(raw);
    const auto csv = dir / "recovery.csv";
    write_csv(csv, table.get(), config_hash(config));
    json artifacts = json::array({csv.string()});

    if (config.contains("ply_samples")) {
        const size_t n = config["ply_samples"];
        if (field.empty())
            field = coordinate_colors(mesh.get());
        std::vector<double> recovered(field.size());
        check(topsig_recover_colors(mesh.get(), field.data(), n, config["bandwidth"], 0, opts.metric_mode,
                                    recovered.data()));
        const auto ply = dir / ("recovered_" + std::to_string(n) + ".ply");
        check(topsig_mesh_write_ply(mesh.get(), ply.string().c_str(), recovered.data(), nullptr, 1));
        artifacts.push_back(ply.string());
    }
    std::cout << "wrote " << csv.string() << " (" << topsig_table_rows(table.get()) << " rows)\n";
    return artifacts;
}

json run_denoise(const json& config)
{
    auto mesh = open_mesh(config["source"]);
    const fs::path dir = prepare_dir(config["output_dir"]);
    const auto snr = config["snr_db"].get<std::vector<double>>();
    const auto lambdas = config["lambda"].get<std::vector<double>>();
    const auto gammas = config["gamma"].get<std::vector<double>>();

    topsig_denoise_options opts{};
    opts.snr_db = snr.data();
    opts.n_snr = snr.size();
    opts.lambdas = lambdas.data();
    opts.n_lambda = lambdas.size();
    opts.gammas = gammas.data();
    opts.n_gamma = gammas.size();
    opts.trials = config["trials"];
    opts.seed = config["seed"];
    opts.metric_mode = metric_mode(config["metric_mode"]);
    opts.unsquared_data_term = config["data_term"] == "unsquared" ? 1 : 0;
    opts.max_iterations = config["max_iterations"];
    opts.threads = config["threads"];

    topsig_table* raw = nullptr;
    check(topsig_denoise_experiment(mesh.get(), &opts, &raw));
    TablePtr table(raw);
    const auto csv = dir / "denoise.csv";
    write_csv(csv, table.get(), config_hash(config));
    json artifacts = json::array({csv.string()});

    if (config.contains("ply_snr")) {
        const size_t t = counts(mesh.get()).t;
        std::vector<double> noisy(3 * t), clean(3 * t);
        check(topsig_denoise_normals(mesh.get(), config["ply_snr"], lambdas.front(), gammas.front(), config["seed"],
                                     opts.metric_mode, noisy.data(), clean.data()));
        const auto colors = coordinate_colors(mesh.get());
        const auto noisy_ply = dir / "normals_noisy.ply", clean_ply = dir / "normals_denoised.ply";
        check(topsig_mesh_write_ply(mesh.get(), noisy_ply.string().c_str(), colors.data(), noisy.data(), 1));
        check(topsig_mesh_write_ply(mesh.get(), clean_ply.string().c_str(), colors.data(), clean.data(), 1));
        artifacts.push_back(noisy_ply.string());
        artifacts.push_back(clean_ply.string());
    }
    std::cout << "wrote " << csv.string() << " (" << topsig_table_rows(table.get()) << " rows)\n";
    return artifacts;
}

json run_spectrum(const json& config)
{
    auto mesh = open_mesh(config["source"]);
    const auto op = operator_from(config["operator"]);
    const auto mode = metric_mode(config["metric_mode"]);
    json artifacts = json::array();
    if (config.contains("export")) {
        const std::string path = config["export"];
        check(topsig_export_matrix_market(mesh.get(), op, mode, path.c_str()));
        artifacts.push_back(path);
    }
    if (op == TOPSIG_OP_B1 || op == TOPSIG_OP_B2 || op == TOPSIG_OP_M0 || op == TOPSIG_OP_M1 || op == TOPSIG_OP_M2) {
        if (artifacts.empty())
            config_error("eigenvalues are available for L1, L1-down, L1-up and L2; use --export for other operators");
        return artifacts;
    }
    size_t rows = 0;
    check(topsig_operator_size(mesh.get(), op, &rows, nullptr));
    const size_t k = config["k"];
    std::vector<double> values(k == 0 || k > rows ? rows : k);
    check(topsig_spectrum(mesh.get(), op, mode, k > rows ? rows : k, values.data()));

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (config.contains("output")) {
        const std::string path = config["output"];
        file.open(path);
        if (!file)
            throw Failure{TOPSIG_ERR_IO, "cannot write " + path};
        out = &file;
        artifacts.push_back(path);
    }
    *out << "index,eigenvalue\n";
    char buf[40];
    for (size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        *out << i << ',' << buf << '\n';
    }
    return artifacts;
}

int run_validate(const std::string& path)
{
    topsig_mesh* raw = nullptr;
    const auto status = topsig_mesh_load(path.c_str(), &raw);
    if (status != TOPSIG_OK) {
        std::cerr << "invalid: " << topsig_last_error() << '\n';
        return status;
    }
    MeshPtr mesh(raw);
    const Counts c = counts(mesh.get());
    std::cout << "ok: N=" << c.n << " E=" << c.e << " T=" << c.t << " chi=" << c.chi << '\n';
    return 0;
}

json dispatch(const json& config)
{
    const std::string command = config.at("command");
    if (command == "generate")
        return run_generate(config);
    if (command == "recover-color")
        return run_recover(config);
    if (command == "denoise-geometry")
        return run_denoise(config);
    if (command == "spectrum")
        return run_spectrum(config);
    config_error("manifest names unknown command '" + command + "'");
}

int execute(const json& config, bool manifest)
{
    const json artifacts = dispatch(config);
    if (manifest) {
        auto mesh = open_mesh(config["source"]);
        fs::path path = config.contains("output_dir") ? fs::path(config["output_dir"].get<std::string>())
                                                      : fs::path(".");
        write_manifest(path / "manifest.json", config, mesh.get(), artifacts);
    }
    return 0;
}

constexpr const char* kExitCodes = R"(
Exit codes:
  0  success
  2  configuration error (bad flags, grids or parameters)
  3  I/O error (unreadable input, unwritable output, malformed file)
  4  mesh validation error (degenerate, duplicate or out-of-range simplices)
  5  numerical failure (ill-conditioned recovery, non-convergence)
)";

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Topological signal processing on triangulated point clouds"};
    app.footer(kExitCodes);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(topsig_version()));

    json config;
    bool write_manifest_file = true;
    int validate_status = -1;

    // generate
    SourceArgs gen_src;
    gen_src.generate = "torus";
    std::string gen_out = "mesh.ply";
    bool gen_ascii = false;
    auto* gen = app.add_subcommand("generate", "Write a synthetic torus or spheroid as PLY");
    add_source_options(gen, gen_src, false);
    gen->add_option("--output,-o", gen_out, "Output PLY path")->capture_default_str();
    gen->add_flag("--ascii", gen_ascii, "Write ASCII instead of binary PLY");

    // recover-color
    SourceArgs rec_src;
    std::string rec_grid = "100:750:50", rec_variants = "full_L1,down_only", rec_mode = "lumped",
                rec_colors = "coordinates", rec_dir = "out";
    size_t rec_bandwidth = 0, rec_max_bandwidth = 400;
    std::uint64_t rec_seed = 1;
    unsigned rec_threads = 0;
    std::optional<size_t> rec_ply;
    auto* rec = app.add_subcommand("recover-color", "Bandlimited color recovery sweep over the number of samples");
    add_source_options(rec, rec_src, true);
    rec->add_option("--n-samples", rec_grid, "Sample counts, start:stop:step or a,b,c")->capture_default_str();
    rec->add_option("--bandwidth", rec_bandwidth, "Bandwidth |K| (0: half the sample count)")->capture_default_str();
    rec->add_option("--max-bandwidth", rec_max_bandwidth, "Cap for the automatic bandwidth")->capture_default_str();
    rec->add_option("--variants", rec_variants, "Laplacians to compare: full_L1, down_only")->capture_default_str();
    rec->add_option("--colors", rec_colors, "Signal: coordinates or file")
        ->check(CLI::IsMember({"coordinates", "file"}))
        ->capture_default_str();
    rec->add_option("--metric-mode", rec_mode, "lumped or consistent-solve")->capture_default_str();
    rec->add_option("--seed", rec_seed, "Seed recorded with every row")->capture_default_str();
    rec->add_option("--threads", rec_threads, "Worker threads (0: all cores)");
    rec->add_option("--output-dir,-o", rec_dir, "Directory for CSV and manifest")->capture_default_str();
    rec->add_option("--write-ply", rec_ply, "Also write the full-L1 recovered colors for this sample count");

    // denoise-geometry
    SourceArgs den_src;
    std::string den_snr = "0:30:5", den_lambda = "0.1,0.2,0.5", den_gamma = "0.1", den_mode = "lumped",
                den_term = "squared", den_dir = "out";
    int den_trials = 20, den_max_iter = 0;
    std::uint64_t den_seed = 1;
    unsigned den_threads = 0;
    std::optional<double> den_ply;
    auto* den = app.add_subcommand("denoise-geometry", "Triangle-normal denoising sweep over SNR, lambda and gamma");
    add_source_options(den, den_src, true);
    den->add_option("--snr", den_snr, "SNR grid in dB")->capture_default_str();
    den->add_option("--lambda", den_lambda, "Smoothness weights")->capture_default_str();
    den->add_option("--gamma", den_gamma, "Sparsity weights")->capture_default_str();
    den->add_option("--trials", den_trials, "Noise realisations per cell")->capture_default_str();
    den->add_option("--data-term", den_term, "squared or unsquared")
        ->check(CLI::IsMember({"squared", "unsquared"}))
        ->capture_default_str();
    den->add_option("--max-iterations", den_max_iter, "Solver iteration cap (0: default)");
    den->add_option("--metric-mode", den_mode, "lumped or consistent-solve")->capture_default_str();
    den->add_option("--seed", den_seed, "Noise seed")->capture_default_str();
    den->add_option("--threads", den_threads, "Worker threads (0: all cores)");
    den->add_option("--output-dir,-o", den_dir, "Directory for CSV and manifest")->capture_default_str();
    den->add_option("--write-ply", den_ply, "Also write noisy and denoised normals at this SNR");

    // spectrum
    SourceArgs spec_src;
    std::string spec_op = "L1", spec_mode = "lumped", spec_out, spec_export;
    size_t spec_k = 20;
    auto* spec = app.add_subcommand("spectrum", "Smallest eigenvalues of a Hodge Laplacian, or a MatrixMarket export");
    add_source_options(spec, spec_src, true);
    spec->add_option("--operator", spec_op, "L1, L1-down, L1-up, L2, B1, B2, M0, M1 or M2")->capture_default_str();
    spec->add_option("--k", spec_k, "Number of eigenvalues (0: all)")->capture_default_str();
    spec->add_option("--metric-mode", spec_mode, "lumped or consistent-solve")->capture_default_str();
    spec->add_option("--output,-o", spec_out, "CSV path (default: stdout)");
    spec->add_option("--export", spec_export, "Write the operator as MatrixMarket");

    // validate
    std::string val_path;
    auto* val = app.add_subcommand("validate", "Check that a mesh file is a valid simplicial complex");
    val->add_option("mesh", val_path, "Mesh file")->required();

    // rerun
    std::string manifest_path;
    auto* rerun = app.add_subcommand("rerun", "Repeat an experiment from its manifest.json");
    rerun->add_option("manifest", manifest_path, "Manifest written by a previous run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : TOPSIG_ERR_CONFIG;
    }

    try {
        if (*val)
            return run_validate(val_path);
        if (*gen) {
            write_manifest_file = false;
            config = {{"command", "generate"}, {"source", source_config(gen_src)}, {"output", gen_out},
                      {"binary", !gen_ascii}};
        } else if (*rec) {
            config = {{"command", "recover-color"},
                      {"source", source_config(rec_src)},
                      {"n_samples", parse_grid<size_t>(rec_grid, "--n-samples")},
                      {"bandwidth", rec_bandwidth},
                      {"max_bandwidth", rec_max_bandwidth},
                      {"variants", json::array()},
                      {"colors", rec_colors},
                      {"metric_mode", rec_mode},
                      {"seed", rec_seed},
                      {"threads", rec_threads},
                      {"output_dir", rec_dir}};
            std::stringstream ss(rec_variants);
            std::string v;
            while (std::getline(ss, v, ',')) {
                if (v != "full_L1" && v != "down_only")
                    config_error("unknown variant '" + v + "'");
                config["variants"].push_back(v);
            }
            metric_mode(rec_mode);
            if (rec_ply)
                config["ply_samples"] = *rec_ply;
        } else if (*den) {
            if (den_trials < 1)
                config_error("--trials must be positive");
            config = {{"command", "denoise-geometry"},
                      {"source", source_config(den_src)},
                      {"snr_db", parse_grid<double>(den_snr, "--snr")},
                      {"lambda", parse_grid<double>(den_lambda, "--lambda")},
                      {"gamma", parse_grid<double>(den_gamma, "--gamma")},
                      {"trials", den_trials},
                      {"data_term", den_term},
                      {"max_iterations", den_max_iter},
                      {"metric_mode", den_mode},
                      {"seed", den_seed},
                      {"threads", den_threads},
                      {"output_dir", den_dir}};
            metric_mode(den_mode);
            if (den_ply)
                config["ply_snr"] = *den_ply;
        } else if (*spec) {
            write_manifest_file = false;
            config = {{"command", "spectrum"}, {"source", source_config(spec_src)}, {"operator", spec_op},
                      {"k", spec_k},          {"metric_mode", spec_mode}};
            if (!spec_out.empty())
                config["output"] = spec_out;
            if (!spec_export.empty())
                config["export"] = spec_export;
        } else if (*rerun) {
            std::ifstream in(manifest_path);
            if (!in)
                throw Failure{TOPSIG_ERR_IO, "cannot read " + manifest_path};
            json manifest;
            try {
                manifest = json::parse(in);
                config = manifest.at("config");
            } catch (const json::exception& e) {
                throw Failure{TOPSIG_ERR_IO, "malformed manifest: " + std::string(e.what())};
            }
        }
        return execute(config, write_manifest_file);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.status;
    } catch (const json::exception& e) {
        std::cerr << "error: invalid configuration: " << e.what() << '\n';
        return TOPSIG_ERR_CONFIG;
    }
}
