// splatbake CLI: transfer, selfcheck, bench.
//
// Exit codes: 0 success, 1 pipeline/threshold failure, 2 usage error.
// Machine-readable key=value summary goes to stdout, diagnostics to stderr.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splatbake/baselines.hpp"
#include "splatbake/error.hpp"
#include "splatbake/geometry.hpp"
#include "splatbake/image.hpp"
#include "splatbake/metrics.hpp"
#include "splatbake/splat.hpp"

using namespace splatbake;

namespace {

int usage_error(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 2;
}

// Runs one named step; Error gains the step name so failures identify
// their stage, per the exit-code contract.
template <class F>
auto run_stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what(), e.line());
    }
}

struct SourceArgs {
    std::string mesh_path;
    std::string texture_path;
    std::string splats_path;
};

struct LoadedSource {
    Mesh mesh;
    Texture texture;
    SplatCloud cloud;
    bool is_mesh = false;

    SourceData data() const {
        SourceData s;
        if (is_mesh) {
            s.mesh = &mesh;
            s.texture = &texture;
        } else {
            s.cloud = &cloud;
        }
        return s;
    }
};

// -1 valid source combination, else an exit-2 message.
std::optional<std::string> check_source_args(const SourceArgs& a) {
    const bool mesh = !a.mesh_path.empty();
    const bool tex = !a.texture_path.empty();
    const bool ply = !a.splats_path.empty();
    if (ply && (mesh || tex))
        return "--source-splats cannot be combined with --source-mesh/--source-texture";
    if (mesh != tex)
        return "--source-mesh and --source-texture must be given together";
    if (!mesh && !ply)
        return "a source is required: --source-mesh with --source-texture, or --source-splats";
    return std::nullopt;
}

LoadedSource load_source(const SourceArgs& a) {
    LoadedSource s;
    if (!a.mesh_path.empty()) {
        s.is_mesh = true;
        s.mesh = run_stage("load source mesh", [&] { return load_obj(a.mesh_path); });
        s.texture = run_stage("load source texture", [&] { return load_png(a.texture_path); });
    } else {
        s.cloud = run_stage("load source splats", [&] { return load_splat_ply(a.splats_path); });
    }
    return s;
}

// "auto" (or empty=policy default) and numeric values share one flag.
bool parse_auto_or_float(const std::string& text, const char* flag, bool& is_auto,
                         std::optional<float>& value, std::string& err) {
    if (text.empty() || text == "auto") {
        is_auto = text == "auto";
        return true;
    }
    try {
        size_t pos = 0;
        const float f = std::stof(text, &pos);
        if (pos != text.size() || !(f > 0.0f)) {
            err = std::string(flag) + " expects a positive number or 'auto'";
            return false;
        }
        value = f;
        return true;
    } catch (const std::exception&) {
        err = std::string(flag) + " expects a positive number or 'auto'";
        return false;
    }
}

bool parse_fallback(const std::string& text, RGBA8& out, std::string& err) {
    int r, g, b, a;
    char trailing;
    const int n = std::sscanf(text.c_str(), "%d,%d,%d,%d%c", &r, &g, &b, &a, &trailing);
    if (n != 4 || r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255 || a < 0 || a > 255) {
        err = "--fallback expects R,G,B,A with each channel in 0..255";
        return false;
    }
    out = {static_cast<uint8_t>(r), static_cast<uint8_t>(g), static_cast<uint8_t>(b),
           static_cast<uint8_t>(a)};
    return true;
}

const char* method_name(Method m) {
    switch (m) {
    case Method::Grid: return "grid";
    case Method::Global: return "global";
    case Method::PerFace: return "perface";
    }
    return "?";
}

void print_transfer_summary(const TransferResult& res, const PipelineOptions& opt,
                            const std::string& out_path) {
    std::printf("method=%s\n", method_name(opt.method));
    if (opt.method == Method::Grid)
        std::printf("traversal=%s\n",
                    opt.params.traversal == Traversal::Dda ? "dda" : "single");
    std::printf("size=%d\n", opt.size);
    std::printf("threads=%d\n", opt.threads);
    std::printf("supersample=%d\n", opt.supersample);
    std::printf("triangles=%zu\n", res.triangle_count);
    std::printf("splats=%zu\n", res.splat_count);
    std::printf("tmax=%.9g\n", res.resolved_t_max);
    if (res.resolved_spacing > 0.0f) {
        std::printf("densify_spacing=%.9g\n", res.resolved_spacing);
        std::printf("densify_inserted=%zu\n", res.densify_inserted);
    } else {
        std::printf("densify_spacing=none\n");
    }
    std::printf("gen_s=%.6f\n", res.seconds.generate);
    std::printf("densify_s=%.6f\n", res.seconds.densify);
    std::printf("grid_s=%.6f\n", res.seconds.grid);
    std::printf("raster_s=%.6f\n", res.seconds.raster);
    std::printf("project_s=%.6f\n", res.seconds.project);
    std::printf("total_s=%.6f\n", res.seconds.total);
    std::printf("coverage=%.6f\n", res.coverage);
    if (!out_path.empty())
        std::printf("out=%s\n", out_path.c_str());
}

struct TransferArgs {
    SourceArgs source;
    std::string target_path;
    std::string out_path;
    PipelineOptions opt;
    std::string tmax_text;
    std::string densify_text;
    std::string fallback_text;
};

void add_transfer_flags(CLI::App* cmd, TransferArgs& a) {
    cmd->add_option("--source-mesh", a.source.mesh_path, "Source mesh (.obj, v/vt/vn)");
    cmd->add_option("--source-texture", a.source.texture_path, "Source texture (.png)");
    cmd->add_option("--source-splats", a.source.splats_path, "Source 3DGS splats (.ply)");
    cmd->add_option("--target-mesh", a.target_path, "Target mesh (.obj)")->required();
    cmd->add_option("--size", a.opt.size, "Output texture size (square)")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", a.opt.threads, "Worker threads for the parallel stages")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--method", a.opt.method, "Projection method")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Method>{
                {"grid", Method::Grid}, {"global", Method::Global}, {"perface", Method::PerFace}},
            CLI::ignore_case));
    cmd->add_option("--tau", a.opt.params.tau, "Alignment cosine threshold");
    cmd->add_option("--tmax", a.tmax_text, "Ray length, or 'auto' (grid cell diagonal)");
    cmd->add_option("--supersample", a.opt.supersample, "Samples per texel axis during generation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--densify-spacing", a.densify_text,
                    "Densify gap threshold, or 'auto' (1.5x median NN distance)");
    cmd->add_option("--fallback", a.fallback_text, "Fallback color R,G,B,A (default 0,0,0,0)");
    cmd->add_option("--max-angle", a.opt.max_angle_deg, "Per-face method: max normal angle (deg)");
    cmd->add_option("--traversal", a.opt.params.traversal,
                    "Grid method: cells visited per ray (single: home cell, dda: walk the segment)")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Traversal>{{"single", Traversal::SingleCell},
                                             {"dda", Traversal::Dda}},
            CLI::ignore_case));
}

// Exit-2 on bad combined flags, 0 to continue.
int resolve_transfer_args(TransferArgs& a) {
    if (auto msg = check_source_args(a.source))
        return usage_error(*msg);
    if (a.opt.method == Method::PerFace && a.source.mesh_path.empty())
        return usage_error("--method perface needs a mesh source");

    std::string err;
    bool is_auto = false;
    std::optional<float> value;
    if (!parse_auto_or_float(a.tmax_text, "--tmax", is_auto, value, err))
        return usage_error(err);
    a.opt.params.t_max = value; // auto and unset both mean AUTO here

    is_auto = false;
    value.reset();
    if (!parse_auto_or_float(a.densify_text, "--densify-spacing", is_auto, value, err))
        return usage_error(err);
    a.opt.densify_spacing = value;
    a.opt.densify_auto = is_auto;

    if (!a.fallback_text.empty() && !parse_fallback(a.fallback_text, a.opt.params.fallback, err))
        return usage_error(err);
    return 0;
}

int cmd_transfer(TransferArgs& a) {
    if (int rc = resolve_transfer_args(a))
        return rc;

    const LoadedSource src = load_source(a.source);
    const Mesh target = run_stage("load target mesh", [&] { return load_obj(a.target_path); });

    const TransferResult res = run_transfer(src.data(), target, a.opt);
    run_stage("write output", [&] { save_png(res.baked, a.out_path); return 0; });

    print_transfer_summary(res, a.opt, a.out_path);
    return 0;
}

int cmd_selfcheck(const std::string& mesh_path, const std::string& texture_path, int size,
                  float threshold, int threads) {
    const Mesh mesh = run_stage("load mesh", [&] { return load_obj(mesh_path); });
    const Texture texture = run_stage("load texture", [&] { return load_png(texture_path); });

    if (size == 0)
        size = texture.width;
    if (size != texture.width || texture.width != texture.height)
        return usage_error("selfcheck needs a square texture and --size matching its dimensions");

    PipelineOptions opt;
    opt.method = Method::Grid;
    opt.size = size;
    opt.threads = threads;

    SourceData src;
    src.mesh = &mesh;
    src.texture = &texture;
    const TransferResult res = run_transfer(src, mesh, opt);
    const SimilarityReport rep = similarity(res.baked, texture, res.pmap);

    std::printf("similarity=%.6f\n", rep.similarity);
    std::printf("mean_abs_error=%.6f\n", rep.mean_abs_error);
    std::printf("compared_texels=%zu\n", rep.compared_texels);
    std::printf("threshold=%.6f\n", threshold);
    std::printf("coverage=%.6f\n", res.coverage);
    return rep.similarity >= threshold ? 0 : 1;
}

int cmd_bench(TransferArgs& a, const std::string& threads_list, int reps,
              const std::string& csv_path) {
    if (int rc = resolve_transfer_args(a))
        return rc;

    std::vector<int> thread_counts;
    {
        std::string tok;
        for (size_t i = 0; i <= threads_list.size(); ++i) {
            if (i == threads_list.size() || threads_list[i] == ',') {
                if (!tok.empty()) {
                    const int t = std::atoi(tok.c_str());
                    if (t < 1)
                        return usage_error("--threads-list expects positive integers");
                    thread_counts.push_back(t);
                    tok.clear();
                }
            } else {
                tok += threads_list[i];
            }
        }
        if (thread_counts.empty())
            return usage_error("--threads-list expects positive integers");
    }

    const LoadedSource src = load_source(a.source);
    const Mesh target = run_stage("load target mesh", [&] { return load_obj(a.target_path); });

    std::vector<BenchReport> reports;
    for (int t : thread_counts) {
        PipelineOptions opt = a.opt;
        opt.threads = t;
        BenchReport rep = bench(src.data(), target, opt, reps);
        const struct {
            const char* name;
            double seconds;
        } rows[3] = {{"grid", rep.grid_seconds},
                     {"raster", rep.raster_seconds},
                     {"project", rep.project_seconds}};
        for (const auto& row : rows)
            std::printf("stage=%s threads=%d seconds=%.6f splats=%zu triangles=%zu width=%d height=%d\n",
                        row.name, rep.threads, row.seconds, rep.splats, rep.triangles, rep.width,
                        rep.height);
        reports.push_back(std::move(rep));
    }

    if (!csv_path.empty()) {
        std::ofstream os(csv_path);
        if (!os)
            throw Error(ErrorKind::IoError, "cannot open '" + csv_path + "' for writing");
        write_bench_csv(reports, os);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"splatbake: bake textures across meshes through 3D Gaussians"};
    app.require_subcommand(1);

    TransferArgs transfer_args;
    CLI::App* transfer = app.add_subcommand("transfer", "Bake the source onto a target mesh");
    add_transfer_flags(transfer, transfer_args);
    transfer->add_option("--out", transfer_args.out_path, "Output texture (.png)")->required();

    std::string sc_mesh, sc_texture;
    int sc_size = 0;
    float sc_threshold = 0.95f;
    int sc_threads = 1;
    CLI::App* selfcheck = app.add_subcommand("selfcheck", "Project a mesh's texture onto itself");
    selfcheck->add_option("--mesh", sc_mesh, "Mesh (.obj)")->required();
    selfcheck->add_option("--texture", sc_texture, "Texture (.png)")->required();
    selfcheck->add_option("--size", sc_size, "Output size (default: texture size)");
    selfcheck->add_option("--threshold", sc_threshold, "Similarity required for exit 0");
    selfcheck->add_option("--threads", sc_threads, "Worker threads")->check(CLI::PositiveNumber);

    TransferArgs bench_args;
    std::string bench_threads = "1";
    int bench_reps = 3;
    std::string bench_csv;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time the pipeline stages");
    add_transfer_flags(bench_cmd, bench_args);
    bench_cmd->add_option("--threads-list", bench_threads, "Comma-separated thread counts");
    bench_cmd->add_option("--reps", bench_reps, "Repetitions (min time wins)")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--csv", bench_csv, "Write stage timings as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*transfer)
            return cmd_transfer(transfer_args);
        if (*selfcheck)
            return cmd_selfcheck(sc_mesh, sc_texture, sc_size, sc_threshold, sc_threads);
        if (*bench_cmd)
            return cmd_bench(bench_args, bench_threads, bench_reps, bench_csv);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
