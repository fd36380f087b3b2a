// Command-line front end: analysis reports, figure-ready CSV sweeps, and the
// packet-level simulator.  All output is deterministic; anything random is
// seeded and the seed is echoed in the output header.

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jsonfmt.hpp"
#include "rcp/dde_sim.hpp"
#include "rcp/grids.hpp"
#include "rcp/hopf.hpp"
#include "rcp/linear_analysis.hpp"
#include "rcp/packet_sim.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kPi = std::numbers::pi;

using jsonfmt::num;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// Output sink: file or stdout ("-").
class Sink {
  public:
    explicit Sink(const std::string& path) : path_(path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
    void finish() {
        stream().flush();
        if (!stream()) throw std::runtime_error("write failed: " + path_);
    }

  private:
    std::string path_;
    std::ofstream file_;
};

const char* branch_name(rcp::Branch b) {
    switch (b) {
        case rcp::Branch::Sigma1: return "sigma1";
        case rcp::Branch::Sigma2: return "sigma2";
        case rcp::Branch::Sigma3: return "sigma3";
        default: return "unstable";
    }
}

const char* criticality_name(rcp::Criticality c) {
    switch (c) {
        case rcp::Criticality::SuperCritical: return "super-critical";
        case rcp::Criticality::SubCritical: return "sub-critical";
        default: return "degenerate";
    }
}

// Shared model-parameter flags.
struct ParamFlags {
    std::string variant;
    double a = 0.0;
    double C = 0.0;
    double tau = 0.0;
    double kappa = 1.0;
    double gamma = 1.0;
    double sigma2 = 1.0;
    std::optional<double> b;
    std::optional<double> rho_star;

    void attach(CLI::App* cmd, bool need_gain = true) {
        cmd->add_option("--variant", variant, "model variant: with-queue or without-queue")
            ->required()
            ->check(CLI::IsMember({"with-queue", "without-queue"}));
        auto* a_opt = cmd->add_option("--a", a, "protocol gain a");
        if (need_gain) a_opt->required();
        cmd->add_option("--C", C, "link capacity")->required();
        cmd->add_option("--tau", tau, "round-trip delay")->required();
        cmd->add_option("--kappa", kappa, "exogenous bifurcation parameter")->capture_default_str();
        cmd->add_option("--b", b, "queue-feedback gain (with-queue)");
        cmd->add_option("--rho-star", rho_star,
                        "target equilibrium utilization (with-queue alternative to --b)");
        cmd->add_option("--gamma", gamma, "target utilization fraction (without-queue)")->capture_default_str();
        cmd->add_option("--sigma2", sigma2, "traffic variability")->capture_default_str();
    }

    rcp::FluidParams resolve() const {
        rcp::FluidParams p;
        p.a = a;
        p.C = C;
        p.tau = tau;
        p.kappa = kappa;
        p.sigma2 = sigma2;
        if (variant == "with-queue") {
            p.variant = rcp::Variant::WithQueue;
            if (b.has_value() == rho_star.has_value())
                throw CLI::ValidationError(
                    "--b/--rho-star", "with-queue requires exactly one of --b or --rho-star");
            p.b = b ? *b : rcp::b_for_utilization(*rho_star);
        } else {
            p.variant = rcp::Variant::WithoutQueue;
            if (b || rho_star)
                throw CLI::ValidationError("--b/--rho-star",
                                           "not meaningful for variant without-queue");
            p.gamma = gamma;
        }
        rcp::validate(p);
        return p;
    }
};

std::string analysis_report_json(const rcp::FluidParams& p, bool stamp) {
    const rcp::Equilibrium eq = rcp::equilibrium(p);
    const rcp::StabilityVerdict sv = rcp::stability(p);
    const rcp::ConvergenceReport cv = rcp::convergence_rate(sv.effective_gain, p.tau);
    const bool robust = rcp::robust_stability(p);
    const rcp::HopfReport hr = rcp::hopf_report(p);

    jsonfmt::Writer w;
    w.begin_object();
    w.key("schema");
    w.value(1);
    w.key("inputs");
    {
        w.begin_object();
        w.key("variant");
        w.value(p.variant == rcp::Variant::WithQueue ? "with-queue" : "without-queue");
        w.key("a");
        w.value(p.a);
        w.key("b");
        w.value(p.b);
        w.key("C");
        w.value(p.C);
        w.key("tau");
        w.value(p.tau);
        w.key("kappa");
        w.value(p.kappa);
        w.key("gamma");
        w.value(p.gamma);
        w.key("sigma2");
        w.value(p.sigma2);
        w.end_object();
    }
    w.key("equilibrium");
    {
        w.begin_object();
        w.key("R_star");
        w.value(eq.R_star);
        w.key("rho_star");
        w.value(eq.rho_star);
        w.end_object();
    }
    w.key("stability");
    {
        w.begin_object();
        w.key("stable");
        w.value(sv.stable);
        w.key("margin");
        w.value(sv.margin);
        w.key("kappa_c");
        w.value(sv.kappa_c);
        w.key("effective_gain");
        w.value(sv.effective_gain);
        w.end_object();
    }
    w.key("convergence");
    {
        w.begin_object();
        w.key("sigma");
        w.value(cv.sigma);
        w.key("branch");
        w.value(branch_name(cv.branch));
        w.key("sigma1");
        w.value(cv.candidates[0]);
        w.key("sigma2");
        w.value(cv.candidates[1]);
        w.key("sigma3");
        w.value(cv.candidates[2]);
        w.end_object();
    }
    w.key("robustly_stable");
    w.value(robust);
    w.key("hopf");
    {
        w.begin_object();
        w.key("kappa_c");
        w.value(hr.kappa_c);
        w.key("mu2");
        w.value(hr.mu2);
        w.key("mu2_closed_form");
        w.value(hr.mu2_closed_form);
        w.key("criticality");
        w.value(criticality_name(hr.criticality));
        w.key("amplitude_coefficient");
        if (hr.amplitude_coefficient)
            w.value(*hr.amplitude_coefficient);
        else
            w.value_null();
        w.end_object();
    }
    w.key("provenance");
    {
        w.begin_object();
        w.key("tool");
        w.value("rcp-workbench");
        w.key("version");
        w.value(kVersion);
        w.key("seed");
        w.value_null();
        if (stamp) {
            char buf[32];
            const std::time_t now = std::time(nullptr);
            std::tm tm{};
            gmtime_r(&now, &tm);
            std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
            w.key("generated_at");
            w.value(buf);
        }
        w.end_object();
    }
    w.end_object();
    return w.str();
}

void write_boundary_csv(std::ostream& os, double a_min, double a_max, int points) {
    const auto pts = rcp::stability_boundary(linspace(a_min, a_max, points));
    os << "a,b,rho_star\n";
    for (const auto& pt : pts) {
        if (!pt.exists) continue;
        os << num(pt.a) << ',' << num(pt.b) << ',' << num(pt.rho_star) << '\n';
    }
}

void write_convergence_a_csv(std::ostream& os, const std::vector<double>& a_grid,
                             double gain_factor, double kappa, double tau) {
    std::vector<double> gains(a_grid.size());
    for (std::size_t i = 0; i < a_grid.size(); ++i) gains[i] = kappa * gain_factor * a_grid[i];
    const auto reports = rcp::convergence_curve(gains, tau);
    os << "a,sigma,branch\n";
    for (std::size_t i = 0; i < a_grid.size(); ++i)
        os << num(a_grid[i]) << ',' << num(reports[i].sigma) << ',' << branch_name(reports[i].branch)
           << '\n';
}

void write_trace_csv(std::ostream& os, const rcp::Trajectory& tr, double r_star, double kappa_c) {
    os << "# R_star=" << num(r_star) << " kappa_c=" << num(kappa_c) << '\n';
    os << "# diverged=" << (tr.diverged ? 1 : 0);
    if (tr.diverged) os << " divergence_time=" << num(tr.divergence_time);
    os << '\n';
    os << "t,R\n";
    const std::size_t first = static_cast<std::size_t>(tr.steps_per_delay);
    // Thin long trajectories to ~50k rows; plots cannot resolve more.
    const std::size_t stride = std::max<std::size_t>(1, (tr.R.size() - first) / 50000);
    for (std::size_t i = first; i < tr.R.size(); i += stride)
        os << num(tr.time_of(i)) << ',' << num(tr.R[i]) << '\n';
}

const char* sweep_flag(const rcp::SweepPoint& pt) {
    if (pt.diverged) return "diverged";
    return pt.converged_to_equilibrium ? "converged" : "oscillating";
}

void write_sweep_csv(std::ostream& os, const rcp::FluidParams& p,
                     const std::vector<double>& kappa_grid, const std::string& direction,
                     const rcp::SweepOptions& opt) {
    std::vector<rcp::SweepPoint> fwd, bwd;
    if (direction != "backward")
        fwd = rcp::sweep_bifurcation(p, kappa_grid, rcp::SweepDirection::Forward, opt);
    if (direction != "forward")
        bwd = rcp::sweep_bifurcation(p, kappa_grid, rcp::SweepDirection::Backward, opt);
    const double r_star = rcp::equilibrium(p).R_star;
    os << "# kappa_c=" << num(rcp::stability(p).kappa_c) << '\n';
    if (direction == "both") {
        const auto hys = rcp::detect_hysteresis(fwd, bwd, 0.15 * r_star);
        os << "# hysteresis=" << (hys.hysteresis ? 1 : 0) << " max_gap=" << num(hys.max_gap)
           << " gap_kappa=" << num(hys.gap_kappa) << '\n';
    }
    os << "kappa,amplitude,flag,direction\n";
    for (const auto& pt : fwd)
        os << num(pt.kappa) << ',' << num(pt.amplitude) << ',' << sweep_flag(pt) << ",forward\n";
    for (const auto& pt : bwd)
        os << num(pt.kappa) << ',' << num(pt.amplitude) << ',' << sweep_flag(pt) << ",backward\n";
}

void write_packet_csv(std::ostream& os, const rcp::PacketTrace& tr) {
    os << "# seed=" << tr.seed << '\n';
    os << "t_ms,queue_pkts,rate_Bpms\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        os << num(tr.t[i]) << ',' << tr.queue_pkts[i] << ',' << num(tr.rate[i]) << '\n';
}

std::string packet_summary_json(const rcp::PacketSimConfig& cfg, const rcp::PacketTrace& tr) {
    jsonfmt::Writer w;
    w.begin_object();
    w.key("schema");
    w.value(1);
    w.key("config");
    {
        w.begin_object();
        w.key("variant");
        w.value(cfg.variant == rcp::Variant::WithQueue ? "with-queue" : "without-queue");
        w.key("capacity_Bpms");
        w.value(cfg.capacity);
        w.key("n_sources");
        w.value(cfg.n_sources);
        w.key("rtt_ms");
        w.value(cfg.rtt);
        w.key("a");
        w.value(cfg.a);
        w.key("b");
        w.value(cfg.b);
        w.key("gamma");
        w.value(cfg.gamma);
        w.key("packet_size_B");
        w.value(cfg.packet_size);
        w.key("control_interval_ms");
        w.value(cfg.control_interval > 0.0 ? cfg.control_interval : cfg.rtt / 16.0);
        w.key("duration_ms");
        w.value(cfg.duration);
        w.key("seed");
        w.value(cfg.seed);
        w.key("buffer_limit_pkts");
        w.value(static_cast<std::int64_t>(cfg.buffer_limit));
        w.end_object();
    }
    w.key("counters");
    {
        w.begin_object();
        w.key("generated");
        w.value(tr.generated);
        w.key("served");
        w.value(tr.served);
        w.key("queued_final");
        w.value(tr.queued_final);
        w.key("dropped");
        w.value(tr.dropped);
        w.end_object();
    }
    w.key("metrics");
    if (tr.t.size() >= 4 && tr.t.back() - tr.t.front() > 20.0 * tr.rtt) {
        const rcp::OscillationMetrics m = rcp::oscillation_metrics(tr);
        w.begin_object();
        w.key("rate_amplitude_Bpms");
        w.value(m.rate_amplitude);
        w.key("queue_amplitude_pkts");
        w.value(m.queue_amplitude);
        w.key("mean_utilization");
        w.value(m.mean_utilization);
        w.end_object();
    } else {
        w.value_null();
    }
    w.key("provenance");
    {
        w.begin_object();
        w.key("tool");
        w.value("rcp-workbench");
        w.key("version");
        w.value(kVersion);
        w.key("seed");
        w.value(cfg.seed);
        w.end_object();
    }
    w.end_object();
    return w.str();
}

// ---------------------------------------------------------------------------
// figures: the canonical CSV set behind the standard plots.

rcp::FluidParams example_params(int which) {
    rcp::FluidParams p;
    p.variant = rcp::Variant::WithQueue;
    p.C = 10.0;
    p.tau = 100.0;
    switch (which) {
        case 1:
            p.a = 1.01;
            p.b = 0.736;
            break;
        case 2:
            p.a = 0.924;
            p.b = 0.257;
            break;
        default:
            p.a = 0.827;
            p.b = 0.022;
            break;
    }
    return p;
}

void write_figures(const std::string& dir, bool with_packets) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(dir + "/" + name);
        if (!f) throw std::runtime_error("cannot open " + dir + "/" + name);
        return f;
    };

    {
        auto f = open("fig2_boundary.csv");
        write_boundary_csv(f, kPi / 4.0, kPi / 2.0, 400);
    }
    {
        auto f = open("fig3_sigma.csv");
        f << "tau,a,sigma,branch\n";
        for (double tau : {1.0, 2.0}) {
            const auto grid = linspace(0.01, kPi / 2.0 - 0.001, 300);
            const auto reports = rcp::convergence_curve(grid, tau);
            for (std::size_t i = 0; i < grid.size(); ++i)
                f << num(tau) << ',' << num(grid[i]) << ',' << num(reports[i].sigma) << ','
                  << branch_name(reports[i].branch) << '\n';
        }
    }
    {
        auto f = open("fig4_sigma_withq.csv");
        f << "b,a,sigma,branch\n";
        for (double b : {0.0, 0.005, 0.4, 0.736}) {
            const double rho = (b + 4.0 - std::sqrt(b * b + 8.0 * b)) / 4.0;
            const auto grid = linspace(0.01, kPi / 2.0 - 0.001, 300);
            std::vector<double> gains(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) gains[i] = grid[i] * (1.0 + rho);
            const auto reports = rcp::convergence_curve(gains, 1.0);
            for (std::size_t i = 0; i < grid.size(); ++i)
                f << num(b) << ',' << num(grid[i]) << ',' << num(reports[i].sigma) << ','
                  << branch_name(reports[i].branch) << '\n';
        }
    }
    {
        auto f = open("fig5_numerator.csv");
        const auto rho = linspace(0.005, 0.995, 199);
        const auto nums = rcp::mu2_numerator_curve(rho);
        f << "rho,numerator\n";
        for (std::size_t i = 0; i < rho.size(); ++i)
            f << num(rho[i]) << ',' << num(nums[i]) << '\n';
    }
    {
        auto fq = open("fig_mu2_quadratics.csv");
        const auto xs = linspace(-5.0, 5.0, 101);
        const auto q = rcp::mu2_quadratics_surface(xs, xs, -1.0);
        fq << "xi_xy,xi_yy,mu2\n";
        for (std::size_t ix = 0; ix < xs.size(); ++ix)
            for (std::size_t iy = 0; iy < xs.size(); ++iy)
                fq << num(xs[ix]) << ',' << num(xs[iy]) << ',' << num(q[ix * xs.size() + iy])
                   << '\n';
        auto fc = open("fig_mu2_cubics.csv");
        const auto cs = linspace(-4.0, 0.0, 101);
        const auto cu = rcp::mu2_cubics_surface(cs, cs, -1.0);
        fc << "xi_xyy,xi_yyy,mu2\n";
        for (std::size_t ix = 0; ix < cs.size(); ++ix)
            for (std::size_t iy = 0; iy < cs.size(); ++iy)
                fc << num(cs[ix]) << ',' << num(cs[iy]) << ',' << num(cu[ix * cs.size() + iy])
                   << '\n';
    }
    const char* sweep_names[3] = {"fig6_sweep_ex1.csv", "fig8_sweep_ex2.csv",
                                  "fig10_sweep_ex3.csv"};
    for (int ex = 1; ex <= 3; ++ex) {
        auto f = open(sweep_names[ex - 1]);
        rcp::SweepOptions opt;
        opt.t_end_per_point = 800.0 * 100.0;
        const auto grid = linspace(0.95, 1.05, 41);
        write_sweep_csv(f, example_params(ex), grid, "both", opt);
    }
    const struct {
        int ex;
        double kappa;
        double r0;
        const char* name;
    } traces[] = {
        {1, 0.95, 5.6, "fig7a_trace_ex1.csv"},  {1, 1.05, 5.6, "fig7b_trace_ex1.csv"},
        {2, 0.95, 6.9, "fig9a_trace_ex2.csv"},  {2, 1.05, 6.9, "fig9b_trace_ex2.csv"},
        {3, 0.95, 8.9, "fig11a_trace_ex3.csv"}, {3, 1.05, 8.9, "fig11b_trace_ex3.csv"},
    };
    for (const auto& t : traces) {
        rcp::FluidParams p = example_params(t.ex);
        p.kappa = t.kappa;
        const auto tr = rcp::integrate(p, t.r0, 500.0 * p.tau, p.tau / 1000.0);
        auto f = open(t.name);
        write_trace_csv(f, tr, rcp::equilibrium(p).R_star, rcp::stability(p).kappa_c);
    }
    if (with_packets) {
        const struct {
            rcp::Variant v;
            double a;
            const char* name;
        } runs[] = {
            {rcp::Variant::WithQueue, 0.4, "pkt_withq_a04"},
            {rcp::Variant::WithQueue, 0.8, "pkt_withq_a08"},
            {rcp::Variant::WithoutQueue, 0.8, "pkt_noq_a08"},
            {rcp::Variant::WithoutQueue, 1.6, "pkt_noq_a16"},
        };
        for (const auto& r : runs) {
            rcp::PacketSimConfig cfg;
            cfg.variant = r.v;
            cfg.a = r.a;
            cfg.seed = 1;
            const auto tr = rcp::run(cfg);
            auto f = open(std::string(r.name) + ".csv");
            write_packet_csv(f, tr);
            auto j = open(std::string(r.name) + ".json");
            j << packet_summary_json(cfg, tr) << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RCP single-bottleneck workbench: stability, convergence, Hopf criticality, "
                 "fluid DDE simulation, and packet-level simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    int exit_code = 0;

    // ---- analyze ----------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "full analysis report as JSON");
    static ParamFlags an_flags;
    an_flags.attach(analyze);
    static std::string an_out = "-";
    static bool an_stamp = false;
    analyze->add_option("--out", an_out, "output file (default stdout)");
    analyze->add_flag("--stamp", an_stamp, "include a generation timestamp");
    analyze->callback([&] {
        Sink sink(an_out);
        sink.stream() << analysis_report_json(an_flags.resolve(), an_stamp) << '\n';
        sink.finish();
    });

    // ---- stability-chart --------------------------------------------------
    auto* chart = app.add_subcommand("stability-chart", "Hopf boundary in the (a,b) plane as CSV");
    static double ch_amin = kPi / 4.0, ch_amax = kPi / 2.0;
    static int ch_points = 400;
    static std::string ch_out = "-";
    chart->add_option("--a-min", ch_amin, "lower end of the a grid")->capture_default_str();
    chart->add_option("--a-max", ch_amax, "upper end of the a grid")->capture_default_str();
    chart->add_option("--points", ch_points, "grid size")->capture_default_str()->check(CLI::PositiveNumber);
    chart->add_option("--out", ch_out, "output file (default stdout)");
    chart->callback([&] {
        Sink sink(ch_out);
        write_boundary_csv(sink.stream(), ch_amin, ch_amax, ch_points);
        sink.finish();
    });

    // ---- convergence ------------------------------------------------------
    auto* conv = app.add_subcommand("convergence", "rate-of-convergence curve as CSV");
    static double cv_amin = 0.01, cv_amax = kPi / 2.0 - 0.001, cv_tau = 1.0, cv_kappa = 1.0;
    static int cv_points = 200;
    static std::string cv_variant = "without-queue", cv_out = "-";
    static std::optional<double> cv_b, cv_rho;
    conv->add_option("--a-min", cv_amin, "lower end of the a grid")->capture_default_str();
    conv->add_option("--a-max", cv_amax, "upper end of the a grid")->capture_default_str();
    conv->add_option("--points", cv_points, "grid size")->capture_default_str()->check(CLI::PositiveNumber);
    conv->add_option("--tau", cv_tau, "round-trip delay")->capture_default_str();
    conv->add_option("--kappa", cv_kappa, "bifurcation parameter")->capture_default_str();
    conv->add_option("--variant", cv_variant, "with-queue or without-queue")->capture_default_str()
        ->check(CLI::IsMember({"with-queue", "without-queue"}));
    conv->add_option("--b", cv_b, "queue gain (with-queue)");
    conv->add_option("--rho-star", cv_rho, "equilibrium utilization (with-queue)");
    static std::optional<double> cv_bmin, cv_bmax;
    static double cv_a_fixed = 0.0;
    conv->add_option("--b-min", cv_bmin, "sweep b instead of a: lower bound");
    conv->add_option("--b-max", cv_bmax, "sweep b instead of a: upper bound");
    conv->add_option("--a", cv_a_fixed, "fixed a for the b sweep");
    conv->add_option("--out", cv_out, "output file (default stdout)");
    conv->callback([&] {
        Sink sink(cv_out);
        if (cv_bmin || cv_bmax) {
            // b sweep at fixed a (with-queue by construction).
            if (!cv_bmin || !cv_bmax || !(cv_a_fixed > 0.0))
                throw CLI::ValidationError("--b-min/--b-max",
                                           "b sweep needs --b-min, --b-max and a positive --a");
            const auto bs = linspace(*cv_bmin, *cv_bmax, cv_points);
            std::vector<double> gains(bs.size());
            for (std::size_t i = 0; i < bs.size(); ++i) {
                const double rho = (bs[i] + 4.0 - std::sqrt(bs[i] * bs[i] + 8.0 * bs[i])) / 4.0;
                gains[i] = cv_kappa * cv_a_fixed * (1.0 + rho);
            }
            const auto reports = rcp::convergence_curve(gains, cv_tau);
            std::ostream& os = sink.stream();
            os << "b,sigma,branch\n";
            for (std::size_t i = 0; i < bs.size(); ++i)
                os << num(bs[i]) << ',' << num(reports[i].sigma) << ','
                   << branch_name(reports[i].branch) << '\n';
            sink.finish();
            return;
        }
        double factor = 1.0;
        if (cv_variant == "with-queue") {
            if (cv_b.has_value() == cv_rho.has_value())
                throw CLI::ValidationError("--b/--rho-star",
                                           "with-queue requires exactly one of --b or --rho-star");
            const double b = cv_b ? *cv_b : rcp::b_for_utilization(*cv_rho);
            factor = 1.0 + (b + 4.0 - std::sqrt(b * b + 8.0 * b)) / 4.0;
        }
        write_convergence_a_csv(sink.stream(), linspace(cv_amin, cv_amax, cv_points), factor,
                                cv_kappa, cv_tau);
        sink.finish();
    });

    // ---- hopf-surface -----------------------------------------------------
    auto* surf = app.add_subcommand("hopf-surface",
                                    "mu2 term-isolation surfaces / criticality curve as CSV");
    static std::string hs_which, hs_out = "-";
    static double hs_min = -5.0, hs_max = 5.0, hs_xi_y = -1.0;
    static int hs_points = 101;
    surf->add_option("--which", hs_which, "quadratics, cubics, or utilization")
        ->required()
        ->check(CLI::IsMember({"quadratics", "cubics", "utilization"}));
    surf->add_option("--min", hs_min, "grid lower bound")->capture_default_str();
    surf->add_option("--max", hs_max, "grid upper bound")->capture_default_str();
    surf->add_option("--points", hs_points, "points per axis")->capture_default_str()->check(CLI::PositiveNumber);
    surf->add_option("--xi-y", hs_xi_y, "linear coefficient xi_y")->capture_default_str();
    surf->add_option("--out", hs_out, "output file (default stdout)");
    surf->callback([&] {
        Sink sink(hs_out);
        std::ostream& os = sink.stream();
        if (hs_which == "utilization") {
            const auto rho = linspace(std::max(hs_min, 0.005), std::min(hs_max, 0.995), hs_points);
            const auto nums = rcp::mu2_numerator_curve(rho);
            os << "rho,numerator\n";
            for (std::size_t i = 0; i < rho.size(); ++i)
                os << num(rho[i]) << ',' << num(nums[i]) << '\n';
        } else {
            const auto grid = linspace(hs_min, hs_max, hs_points);
            const bool quad = hs_which == "quadratics";
            const auto vals = quad ? rcp::mu2_quadratics_surface(grid, grid, hs_xi_y)
                                   : rcp::mu2_cubics_surface(grid, grid, hs_xi_y);
            os << (quad ? "xi_xy,xi_yy,mu2" : "xi_xyy,xi_yyy,mu2") << '\n';
            for (std::size_t ix = 0; ix < grid.size(); ++ix)
                for (std::size_t iy = 0; iy < grid.size(); ++iy)
                    os << num(grid[ix]) << ',' << num(grid[iy]) << ','
                       << num(vals[ix * grid.size() + iy]) << '\n';
        }
        sink.finish();
    });

    // ---- simulate-fluid ---------------------------------------------------
    auto* fluid = app.add_subcommand("simulate-fluid", "integrate the delay equation, CSV t,R");
    static ParamFlags fl_flags;
    fl_flags.attach(fluid);
    static double fl_r0 = 0.0, fl_tend = 0.0, fl_dt = 0.0;
    static std::string fl_out = "-";
    fluid->add_option("--R0", fl_r0, "constant initial rate on [-tau, 0]")->required();
    fluid->add_option("--t-end", fl_tend, "integration horizon")->required();
    fluid->add_option("--dt", fl_dt, "requested step (default tau/1000)");
    fluid->add_option("--out", fl_out, "output file (default stdout)");
    fluid->callback([&] {
        const rcp::FluidParams p = fl_flags.resolve();
        const auto tr = rcp::integrate(p, fl_r0, fl_tend, fl_dt > 0.0 ? fl_dt : p.tau / 1000.0);
        Sink sink(fl_out);
        write_trace_csv(sink.stream(), tr, rcp::equilibrium(p).R_star, rcp::stability(p).kappa_c);
        sink.finish();
    });

    // ---- sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand(
        "sweep", "bifurcation-diagram sweep over kappa with warm continuation, CSV");
    static ParamFlags sw_flags;
    sw_flags.attach(sweep);
    static double sw_kmin = 0.95, sw_kmax = 1.05, sw_tend = 0.0;
    static int sw_points = 21;
    static std::string sw_dir = "both", sw_out = "-";
    sweep->add_option("--kappa-min", sw_kmin, "lower end of the kappa grid")->capture_default_str();
    sweep->add_option("--kappa-max", sw_kmax, "upper end of the kappa grid")->capture_default_str();
    sweep->add_option("--points", sw_points, "kappa grid size")->capture_default_str()->check(CLI::PositiveNumber);
    sweep->add_option("--direction", sw_dir, "forward, backward, or both")->capture_default_str()
        ->check(CLI::IsMember({"forward", "backward", "both"}));
    sweep->add_option("--point-t-end", sw_tend, "integration horizon per grid point");
    sweep->add_option("--out", sw_out, "output file (default stdout)");
    sweep->callback([&] {
        const rcp::FluidParams p = sw_flags.resolve();
        rcp::SweepOptions opt;
        if (sw_tend > 0.0) opt.t_end_per_point = sw_tend;
        Sink sink(sw_out);
        write_sweep_csv(sink.stream(), p, linspace(sw_kmin, sw_kmax, sw_points), sw_dir, opt);
        sink.finish();
    });

    // ---- simulate-packets --------------------------------------------------
    auto* pkt = app.add_subcommand("simulate-packets",
                                   "discrete-event packet simulation; CSV trace + JSON summary");
    static std::string pk_config, pk_variant = "with-queue", pk_trace = "-", pk_summary;
    static rcp::PacketSimConfig pk_cfg;
    static std::optional<double> pk_gbps;
    pkt->add_option("--config", pk_config,
                    "flat key=value config file (explicit flags take precedence)");
    pkt->add_option("--variant", pk_variant, "with-queue or without-queue")->capture_default_str()
        ->check(CLI::IsMember({"with-queue", "without-queue"}));
    pkt->add_option("--capacity", pk_cfg.capacity, "link capacity in bytes/ms")->capture_default_str();
    pkt->add_option("--gbps", pk_gbps, "link capacity in Gbit/s (overrides --capacity)");
    pkt->add_option("--n", pk_cfg.n_sources, "number of sources")->capture_default_str();
    pkt->add_option("--rtt", pk_cfg.rtt, "round-trip time in ms")->capture_default_str();
    pkt->add_option("--a", pk_cfg.a, "protocol gain a")->capture_default_str();
    pkt->add_option("--b", pk_cfg.b, "queue-feedback gain")->capture_default_str();
    pkt->add_option("--gamma", pk_cfg.gamma, "target utilization (without-queue)")->capture_default_str();
    pkt->add_option("--packet-size", pk_cfg.packet_size, "packet size in bytes")->capture_default_str();
    pkt->add_option("--control-interval", pk_cfg.control_interval,
                    "router update interval in ms (0 = rtt/16)")->capture_default_str();
    pkt->add_option("--duration", pk_cfg.duration, "simulated time in ms")->capture_default_str();
    pkt->add_option("--seed", pk_cfg.seed, "PRNG seed")->capture_default_str();
    pkt->add_option("--buffer-limit", pk_cfg.buffer_limit,
                    "buffer size in packets (<0 unbounded)")
        ->capture_default_str();
    pkt->add_option("--trace", pk_trace, "trace CSV output (default stdout)");
    pkt->add_option("--summary", pk_summary, "summary JSON output");
    pkt->callback([&] {
        rcp::PacketSimConfig cfg = pk_cfg;
        bool gbps_from_config = false;
        double gbps_config = 0.0;
        if (!pk_config.empty()) {
            std::ifstream f(pk_config);
            if (!f) throw std::runtime_error("cannot open config file: " + pk_config);
            std::string line;
            int lineno = 0;
            while (std::getline(f, line)) {
                ++lineno;
                const auto start = line.find_first_not_of(" \t\r");
                if (start == std::string::npos || line[start] == '#') continue;
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw std::runtime_error(pk_config + ": line " + std::to_string(lineno) +
                                             " is not key=value");
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t\r");
                    const auto e = s.find_last_not_of(" \t\r");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                const std::string key = trim(line.substr(0, eq));
                const std::string val = trim(line.substr(eq + 1));
                // Explicit command-line flags win over the file.
                const auto flag = "--" + key;
                const CLI::Option* opt = pkt->get_option_no_throw(flag);
                if (opt != nullptr && opt->count() > 0) continue;
                if (key == "variant") {
                    if (val != "with-queue" && val != "without-queue")
                        throw std::runtime_error("config: bad variant " + val);
                    pk_variant = val;
                } else if (key == "capacity") {
                    cfg.capacity = std::stod(val);
                } else if (key == "gbps") {
                    gbps_from_config = true;
                    gbps_config = std::stod(val);
                } else if (key == "n") {
                    cfg.n_sources = std::stoi(val);
                } else if (key == "rtt") {
                    cfg.rtt = std::stod(val);
                } else if (key == "a") {
                    cfg.a = std::stod(val);
                } else if (key == "b") {
                    cfg.b = std::stod(val);
                } else if (key == "gamma") {
                    cfg.gamma = std::stod(val);
                } else if (key == "packet-size") {
                    cfg.packet_size = std::stod(val);
                } else if (key == "control-interval") {
                    cfg.control_interval = std::stod(val);
                } else if (key == "duration") {
                    cfg.duration = std::stod(val);
                } else if (key == "seed") {
                    cfg.seed = std::stoull(val);
                } else if (key == "buffer-limit") {
                    cfg.buffer_limit = std::stoll(val);
                } else {
                    throw std::runtime_error("config: unknown key '" + key + "'");
                }
            }
        }
        cfg.variant =
            pk_variant == "with-queue" ? rcp::Variant::WithQueue : rcp::Variant::WithoutQueue;
        if (pk_gbps)
            cfg.capacity = *pk_gbps * 125000.0;
        else if (gbps_from_config)
            cfg.capacity = gbps_config * 125000.0;
        const rcp::PacketTrace tr = rcp::run(cfg);
        Sink sink(pk_trace);
        write_packet_csv(sink.stream(), tr);
        sink.finish();
        if (!pk_summary.empty()) {
            Sink js(pk_summary);
            js.stream() << packet_summary_json(cfg, tr) << '\n';
            js.finish();
        }
    });

    // ---- figures ------------------------------------------------------------
    auto* figs = app.add_subcommand("figures",
                                    "write the full figure-equivalent CSV set into a directory");
    static std::string fg_dir;
    static bool fg_packets = false;
    figs->add_option("--out", fg_dir, "output directory")->required();
    figs->add_flag("--with-packets", fg_packets, "include the packet-level trace set");
    figs->callback([&] { write_figures(fg_dir, fg_packets); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
