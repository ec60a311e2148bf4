#include "legsynth/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "legsynth/config.hpp"
#include "legsynth/errors.hpp"
#include "legsynth/io.hpp"

namespace legsynth {

namespace {

namespace fs = std::filesystem;

struct DesignFlags {
    int kind = 1;
    double l1 = 0.0;
    double l2 = 0.0;
    std::optional<double> l3;
    double r_min = PipeSpec{}.r_min;
    double r_max = PipeSpec{}.r_max;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "mechanism: 1 slot-follower, 2 four-bar, 3 six-bar")
            ->required()
            ->check(CLI::IsMember({1, 2, 3}));
        cmd->add_option("--l1", l1, "link length l1 (mm)")->required();
        cmd->add_option("--l2", l2, "link length l2 (mm)")->required();
        cmd->add_option("--l3", l3, "link length l3 (mm), kinds 2 and 3");
        cmd->add_option("--rmin", r_min, "smallest pipe radius (mm)");
        cmd->add_option("--rmax", r_max, "largest pipe radius (mm)");
    }

    [[nodiscard]] PipeSpec pipe() const {
        PipeSpec p;
        p.r_min = r_min;
        p.r_max = r_max;
        validate(p);
        return p;
    }

    // Parse-level checks shared by evaluate and sweep: lengths valid and
    // inside the g10 box, stroke reachable.
    [[nodiscard]] DesignVector design() const {
        const MechanismKind k = kind_from_int(kind);
        if (k != MechanismKind::SlotFollower && !l3) {
            throw Error(ErrorCode::InvalidArgument, "--l3 is required for kind " + std::to_string(kind));
        }
        const DesignVector d = make_design(k, l1, l2, l3.value_or(0.0));
        const DesignLimits limits;
        const auto check = [&](const char* name, double v) {
            if (!(v >= limits.length_min && v <= limits.length_max)) {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "g10 violated: %s = %g mm is outside [%g, %g] mm", name, v,
                              limits.length_min, limits.length_max);
                throw Error(ErrorCode::InvalidGeometry, buf);
            }
        };
        check("l1", l1);
        check("l2", l2);
        if (d.lengths.l3) {
            check("l3", *d.lengths.l3);
        }
        validate(d.kind, d.lengths);
        return d;
    }
};

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

int cmd_evaluate(const DesignFlags& flags, std::size_t samples, std::ostream& out) {
    const DesignVector design = flags.design();
    const PipeSpec pipe = flags.pipe();
    const StrokeInterval stroke = operating_stroke(design, pipe);
    const Evaluation ev = evaluate_design(design, pipe, {samples, {}});

    const auto& len = design.lengths;
    out << "kind     " << to_int(design.kind) << " (" << to_string(design.kind) << ")\n";
    out << "lengths  l1=" << fmt("%.4f", len.l1) << " l2=" << fmt("%.4f", len.l2);
    if (len.l3) {
        out << " l3=" << fmt("%.4f", *len.l3);
    }
    out << "\nstroke   rho " << fmt("%.4f", stroke.rho_lo) << " .. " << fmt("%.4f", stroke.rho_hi) << '\n';
    out << "delta_x  " << (ev.delta_x ? fmt("%.4f", *ev.delta_x) + " mm" : std::string("n/a")) << '\n';
    out << "eta_min  " << (ev.eta_min ? fmt("%.6f", *ev.eta_min) : std::string("n/a")) << '\n';
    for (const auto& c : ev.constraints) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%-4s %-9s margin %+.6f\n", std::string(to_string(c.id)).c_str(),
                      c.satisfied ? "ok" : "violated", c.margin);
        out << buf;
    }
    if (!ev.note.empty()) {
        out << "note     " << ev.note << '\n';
    }
    out << (ev.feasible ? "feasible\n" : "infeasible\n");
    return ev.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_sweep(const DesignFlags& flags, std::size_t samples, const std::string& output, std::ostream& out) {
    if (samples < 2) {
        throw Error(ErrorCode::InvalidArgument, "--samples must be at least 2");
    }
    const DesignVector design = flags.design();
    const PipeSpec pipe = flags.pipe();
    const StrokeInterval stroke = operating_stroke(design, pipe);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            throw Error(ErrorCode::InvalidArgument, "cannot write '" + output + "'");
        }
    }
    std::ostream& os = output.empty() ? out : file;
    os << "rho,y,eta,Ox,Oy,Ax,Ay,Bx,By,Cx,Cy,Dx,Dy,Px,Py\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return std::string(buf);
    };
    const auto point = [&](const std::optional<Point2>& p) {
        return p ? num(p->x) + "," + num(p->y) : std::string(",");
    };
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double rho = stroke.rho_lo + t * (stroke.rho_hi - stroke.rho_lo);
        const JointLayout j = joint_layout(design.kind, design.lengths, rho);
        const double eta = transmission_efficiency(design.kind, design.lengths, rho);
        os << num(rho) << ',' << num(j.P.y) << ',' << num(eta) << ',' << point(j.O) << ',' << point(j.A) << ','
           << point(j.B) << ',' << point(j.C) << ',' << point(j.D) << ',' << point(j.P) << '\n';
    }
    return kExitFeasible;
}

void write_outputs(const ParetoSet& front, const RunConfig& config, double wall, std::ostream& out) {
    const fs::path dir(config.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::InvalidArgument, "cannot create output directory '" + dir.string() + "'");
    }
    const auto members = export_order(front.members);
    const auto open = [](const fs::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) {
            throw Error(ErrorCode::InvalidArgument, "cannot write '" + p.string() + "'");
        }
        return f;
    };
    {
        auto f = open(dir / config.output.csv);
        write_front_csv(f, members);
    }
    {
        auto f = open(dir / config.output.svg);
        write_front_svg(f, members);
    }
    {
        auto f = open(dir / config.output.json);
        ParetoSet written{members, front.provenance};
        f << provenance_json(written, {config.pipe, wall, {}});
    }

    std::vector<ObjectivePoint> points;
    for (const auto& m : members) {
        points.push_back(m.objectives);
    }
    out << "front    " << members.size() << " members, hypervolume " << fmt("%.6f", hypervolume(points)) << '\n';
    out << "wrote    " << (dir / config.output.csv).string() << ", " << (dir / config.output.json).string() << ", "
        << (dir / config.output.svg).string() << '\n';
}

RunConfig config_with_env(const std::string& path) {
    RunConfig config = load_config(path);
    if (const char* seed = std::getenv("LEGSYNTH_SEED")) {
        config.optimizer.seed = static_cast<std::uint64_t>(
            std::stoull(std::string(seed)));
    }
    return config;
}

int cmd_optimize(const std::string& config_path, std::ostream& out) {
    const RunConfig config = config_with_env(config_path);
    const auto t0 = std::chrono::steady_clock::now();
    const ParetoSet front = nsga2_run(config.optimizer, config.pipe, config.fixed_kind);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(front, config, wall, out);
    return kExitFeasible;
}

int cmd_oracle(const std::string& config_path, std::ostream& out, std::ostream& err) {
    const RunConfig config = config_with_env(config_path);
    if (!config.grid) {
        throw Error(ErrorCode::InvalidArgument, "oracle needs grid.* keys in the config");
    }
    OracleOptions options;
    options.samples = config.optimizer.samples;
    options.threads = config.optimizer.threads;
    int last_decile = -1;
    options.progress = [&](const OracleProgress& p) {
        const int decile = p.total ? static_cast<int>(10 * p.done / p.total) : 10;
        if (decile != last_decile) {
            last_decile = decile;
            err << "oracle   " << p.done << "/" << p.total << " points, " << p.evaluated << " evaluated, "
                << p.feasible << " feasible\n";
        }
    };
    const auto t0 = std::chrono::steady_clock::now();
    const ParetoSet front = grid_oracle(*config.grid, config.pipe, options);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (front.members.empty()) {
        err << "error: no feasible grid point\n";
        return kExitNoFeasible;
    }
    write_outputs(front, config, wall, out);
    return kExitFeasible;
}

int cmd_pareto(const std::string& input, const std::string& output, std::ostream& out) {
    std::ifstream in(input);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot read '" + input + "'");
    }
    const auto members = export_order(read_front_csv(in));
    if (output.empty()) {
        write_front_csv(out, members);
    } else {
        std::ofstream f(output, std::ios::binary);
        if (!f) {
            throw Error(ErrorCode::InvalidArgument, "cannot write '" + output + "'");
        }
        write_front_csv(f, members);
    }
    return kExitFeasible;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dimensional synthesis of in-pipe robot leg mechanisms", "legsynth"};
    app.require_subcommand(1);

    DesignFlags eval_flags;
    std::size_t eval_samples = 512;
    auto* evaluate = app.add_subcommand("evaluate", "objectives and constraint status of one design");
    eval_flags.add_to(evaluate);
    evaluate->add_option("--samples", eval_samples, "stroke samples");

    DesignFlags sweep_flags;
    std::size_t sweep_samples = 101;
    std::string sweep_output;
    auto* sweep = app.add_subcommand("sweep", "per-rho table over the operating stroke");
    sweep_flags.add_to(sweep);
    sweep->add_option("--samples", sweep_samples, "rows to write (>= 2)");
    sweep->add_option("-o,--output", sweep_output, "CSV path (default stdout)");

    std::string optimize_config;
    auto* optimize = app.add_subcommand("optimize", "NSGA-II run driven by a config file");
    optimize->add_option("config", optimize_config, "config file")->required();

    std::string oracle_config;
    auto* oracle = app.add_subcommand("oracle", "exhaustive grid front driven by a config file");
    oracle->add_option("config", oracle_config, "config file")->required();

    std::string pareto_input;
    std::string pareto_output;
    auto* pareto = app.add_subcommand("pareto", "filter a front CSV to its non-dominated members");
    pareto->add_option("input", pareto_input, "front CSV")->required();
    pareto->add_option("-o,--output", pareto_output, "CSV path (default stdout)");

    ElbowSpec elbow_spec;
    auto* elbow = app.add_subcommand("elbow", "longest rigid segment passing an elbow");
    elbow->add_option("--rp", elbow_spec.r_p, "pipe radius (mm)");
    elbow->add_option("--rc", elbow_spec.r_c, "elbow centerline radius (mm)");
    elbow->add_option("--dr", elbow_spec.d_r, "robot body diameter (mm)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitFeasible;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitFeasible;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitError;
    }

    try {
        if (*evaluate) {
            return cmd_evaluate(eval_flags, eval_samples, out);
        }
        if (*sweep) {
            return cmd_sweep(sweep_flags, sweep_samples, sweep_output, out);
        }
        if (*optimize) {
            return cmd_optimize(optimize_config, out);
        }
        if (*oracle) {
            return cmd_oracle(oracle_config, out, err);
        }
        if (*pareto) {
            return cmd_pareto(pareto_input, pareto_output, out);
        }
        if (*elbow) {
            out << "L_max    " << fmt("%.4f", elbow_max_length(elbow_spec)) << " mm\n";
            return kExitFeasible;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::NoFeasible ? kExitNoFeasible : kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace legsynth
