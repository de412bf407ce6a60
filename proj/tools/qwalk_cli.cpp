// qwalk — command-line front end for the walk/band/zak/slm/two-photon/
// architecture toolkit. Emits plot-ready CSV and JSON; all outputs are
// deterministic functions of the resolved flags, so identical invocations
// produce byte-identical files.
//
// Exit codes: 0 success, 2 usage (bad flags/config syntax), 3 domain error
// (a precondition such as a resolution bound was violated), 4 numerical
// non-convergence (a computation refused to return an unreliable value).

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk/qwalk.hpp"

using nlohmann::json;

namespace {

// ---------- resolved invocation state ----------

struct Invocation {
    // globals
    std::string out_dir = ".";
    std::string config_path;
    int threads = 1;
    long long seed = 0;

    // protocol family flags (walk / slm / hybrid)
    std::string protocol = "standard";
    std::string axis = "y";
    double theta = 0.0, theta1 = 0.0, theta2 = 0.0, phi = 0.0;

    // initial coin (walk / hybrid)
    double a_re = 1.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
    bool symmetric = false;
    int site = 0;

    int steps = 0;  // walk

    // bands / dirac
    std::string family = "noncommuting";
    int res = 256;
    int k_res = 257;

    // zak
    std::string zak_family = "splitstep";
    std::string method = "wilson";
    int zak_res = 64;
    int samples = 256;

    // slm
    int slm_n = 4;
    int rows = 1920;
    int cols = 128;
    int period = 16;
    int rows_per_mode = 0;  // 0 = choose automatically

    int hybrid_n = 4;

    // arch
    int target_n = 20;
    double eta = 0.50;
    double outcoupling = 0.05;
    double rep_rate = 111e3;
    double mean_photon = 0.003;
    double transmission = 1.0;
    double min_rate = 1e-3;
    bool outcouple_first = false;
};

// Canonical flag string rebuilt from resolved values (not raw argv): a run
// driven by a config file and a run with the same values spelled as flags
// produce the same comment line, hence identical files.
class InvLine {
  public:
    explicit InvLine(const std::string& cmd) : s_("qwalk " + cmd) {}
    InvLine& add(const char* f, const std::string& v) {
        s_ += ' ';
        s_ += f;
        s_ += ' ';
        s_ += v;
        return *this;
    }
    InvLine& add(const char* f, double v) { return add(f, qwalk::format_double(v)); }
    InvLine& add(const char* f, int v) { return add(f, std::to_string(v)); }
    InvLine& add(const char* f, long long v) { return add(f, std::to_string(v)); }
    InvLine& add(const char* f, bool v) { return add(f, std::string(v ? "1" : "0")); }
    InvLine& globals(const Invocation& inv) {
        return add("--out", inv.out_dir).add("--threads", inv.threads).add("--seed", inv.seed);
    }
    const std::string& str() const { return s_; }

  private:
    std::string s_;
};

std::string out_path(const Invocation& inv, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(inv.out_dir);
    return (fs::path(inv.out_dir) / name).string();
}

void emit(const Invocation& inv, const std::string& name, const std::string& content) {
    const std::string path = out_path(inv, name);
    qwalk::write_text_file(path, content);
    std::cout << "wrote: " << path << "\n";
}

// ---------- shared builders ----------

std::array<double, 3> axis_vector(const std::string& axis) {
    if (axis == "x") return {1.0, 0.0, 0.0};
    if (axis == "y") return {0.0, 1.0, 0.0};
    return {0.0, 0.0, 1.0};
}

qwalk::Protocol protocol_from(const Invocation& inv) {
    if (inv.protocol == "standard")
        return qwalk::StandardProtocol{axis_vector(inv.axis), inv.theta};
    if (inv.protocol == "splitstep") return qwalk::SplitStepProtocol{inv.theta1, inv.theta2};
    if (inv.protocol == "noncommuting") return qwalk::NonCommutingProtocol{inv.theta, inv.phi};
    return qwalk::HadamardProtocol{};
}

qwalk::InitialCondition initial_from(const Invocation& inv) {
    qwalk::InitialCondition init;
    init.site = inv.site;
    if (inv.symmetric) {
        init.coin = qwalk::symmetric_coin();
        return init;
    }
    const qwalk::Complex a{inv.a_re, inv.a_im}, b{inv.b_re, inv.b_im};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n < 1e-12) throw std::invalid_argument("initial coin amplitudes must not both be zero");
    init.coin = {a / n, b / n};
    return init;
}

void append_protocol_flags(InvLine& line, const Invocation& inv) {
    line.add("--protocol", inv.protocol);
    if (inv.protocol == "standard")
        line.add("--axis", inv.axis).add("--theta", inv.theta);
    else if (inv.protocol == "splitstep")
        line.add("--theta1", inv.theta1).add("--theta2", inv.theta2);
    else if (inv.protocol == "noncommuting")
        line.add("--theta", inv.theta).add("--phi", inv.phi);
}

void append_coin_flags(InvLine& line, const Invocation& inv) {
    if (inv.symmetric)
        line.add("--symmetric", true);
    else
        line.add("--a-re", inv.a_re)
            .add("--a-im", inv.a_im)
            .add("--b-re", inv.b_re)
            .add("--b-im", inv.b_im);
}

qwalk::Family family_from(const std::string& name) {
    if (name == "standard") return qwalk::Family::standard;
    if (name == "splitstep") return qwalk::Family::split_step;
    return qwalk::Family::non_commuting;
}

qwalk::ZakMethod method_from(const std::string& name) {
    if (name == "wilson") return qwalk::ZakMethod::wilson;
    if (name == "connection") return qwalk::ZakMethod::connection;
    if (name == "integrand") return qwalk::ZakMethod::integrand;
    return qwalk::ZakMethod::analytic;
}

// ---------- commands ----------

void cmd_walk(const Invocation& inv) {
    InvLine line("walk");
    append_protocol_flags(line, inv);
    line.add("--steps", inv.steps).add("--site", inv.site);
    append_coin_flags(line, inv);
    line.globals(inv);

    const auto state = qwalk::evolve(initial_from(inv), protocol_from(inv), inv.steps);
    const auto dist = qwalk::probability_distribution(state);

    std::ostringstream csv;
    csv << "# " << line.str() << "\n";
    csv << "j,P\n";
    for (const auto& [j, p] : dist) csv << j << "," << qwalk::format_double(p) << "\n";
    emit(inv, "walk.csv", csv.str());
}

void emit_dirac_outputs(const Invocation& inv, const std::string& line) {
    const auto scan = qwalk::find_dirac_points(inv.res);

    std::ostringstream csv;
    csv << "# " << line << "\n";
    csv << "theta,phi,k_class,k,residual\n";
    for (const auto& pt : scan.points)
        csv << qwalk::format_double(pt.theta) << "," << qwalk::format_double(pt.phi) << ","
            << pt.k_class << "," << qwalk::format_double(pt.k) << ","
            << qwalk::format_double(pt.residual) << "\n";
    emit(inv, "dirac_points.csv", csv.str());

    json report;
    report["invocation"] = line;
    report["resolution"] = inv.res;
    report["count_identified"] = scan.count_identified;
    report["count_unidentified"] = scan.count_unidentified;
    report["count_torus"] = scan.count_torus;
    report["partition"] = scan.partition;
    report["points"] = json::array();
    for (const auto& pt : scan.points)
        report["points"].push_back({{"theta", pt.theta},
                                    {"phi", pt.phi},
                                    {"k_class", pt.k_class},
                                    {"k", pt.k},
                                    {"residual", pt.residual}});
    emit(inv, "dirac_points.json", report.dump(2) + "\n");
}

void cmd_bands(const Invocation& inv) {
    InvLine line("bands");
    line.add("--family", inv.family).add("--res", inv.res).add("--k-res", inv.k_res);
    line.globals(inv);

    const auto rows =
        qwalk::phase_diagram(family_from(inv.family), inv.res, inv.k_res, inv.threads);
    std::ostringstream csv;
    csv << "# " << line.str() << "\n";
    csv << "p1,p2,k_at_min,gap0,gap_pi\n";
    for (const auto& r : rows)
        csv << qwalk::format_double(r.p1) << "," << qwalk::format_double(r.p2) << ","
            << qwalk::format_double(r.k_at_min) << "," << qwalk::format_double(r.gap0) << ","
            << qwalk::format_double(r.gap_pi) << "\n";
    emit(inv, "gapmap.csv", csv.str());

    if (inv.family == "noncommuting") emit_dirac_outputs(inv, line.str());
}

void cmd_dirac(const Invocation& inv) {
    InvLine line("dirac");
    line.add("--res", inv.res);
    line.globals(inv);
    emit_dirac_outputs(inv, line.str());
}

std::string landscape_csv(const std::string& line, const std::vector<qwalk::LandscapeCell>& cells) {
    std::ostringstream csv;
    csv << "# " << line << "\n";
    csv << "p1,p2,z_plus,z_minus,defined\n";
    for (const auto& c : cells) {
        csv << qwalk::format_double(c.p1) << "," << qwalk::format_double(c.p2) << ",";
        if (c.defined)
            csv << qwalk::format_double(c.z_plus) << "," << qwalk::format_double(c.z_minus)
                << ",1\n";
        else
            csv << ",,0\n";  // masked: no value exists at a gap closure
    }
    return csv.str();
}

void cmd_zak(const Invocation& inv) {
    InvLine line("zak");
    line.add("--family", inv.zak_family)
        .add("--method", inv.method)
        .add("--res", inv.zak_res)
        .add("--samples", inv.samples);
    line.globals(inv);

    const qwalk::Family fam = family_from(inv.zak_family);
    const qwalk::ZakMethod method = method_from(inv.method);
    const auto cells =
        qwalk::zak_landscape(fam, inv.zak_res, method, inv.samples, inv.threads);
    emit(inv, "zak.csv", landscape_csv(line.str(), cells));

    if (fam != qwalk::Family::split_step) return;

    // Split-step dual output: the closed-form ratio next to a numeric
    // landscape, masked where either side is undefined. Agreement between the
    // columns is deliberately not asserted anywhere — the comparison itself
    // is the deliverable.
    const auto numeric = inv.method == "analytic"
                             ? qwalk::zak_landscape(fam, inv.zak_res, qwalk::ZakMethod::wilson,
                                                    inv.samples, inv.threads)
                             : cells;
    const auto analytic = qwalk::zak_landscape(fam, inv.zak_res, qwalk::ZakMethod::analytic,
                                               inv.samples, inv.threads);
    emit(inv, "zak_analytic.csv", landscape_csv(line.str(), analytic));

    std::ostringstream csv;
    csv << "# " << line.str() << "\n";
    csv << "p1,p2,z_numeric_plus,z_numeric_minus,z_analytic,defined_numeric,defined_analytic\n";
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const auto& nu = numeric[i];
        const auto& an = analytic[i];
        csv << qwalk::format_double(nu.p1) << "," << qwalk::format_double(nu.p2) << ",";
        if (nu.defined)
            csv << qwalk::format_double(nu.z_plus) << "," << qwalk::format_double(nu.z_minus);
        else
            csv << ",";
        csv << ",";
        if (an.defined) csv << qwalk::format_double(an.z_plus);
        csv << "," << (nu.defined ? 1 : 0) << "," << (an.defined ? 1 : 0) << "\n";
    }
    emit(inv, "zak_compare.csv", csv.str());
}

void cmd_slm(const Invocation& inv) {
    InvLine line("slm");
    line.add("--n", inv.slm_n)
        .add("--rows", inv.rows)
        .add("--cols", inv.cols)
        .add("--period", inv.period)
        .add("--rows-per-mode", inv.rows_per_mode);
    append_protocol_flags(line, inv);
    append_coin_flags(line, inv);
    line.globals(inv);

    const int max_step = qwalk::max_step_for_resolution(inv.rows);
    if (inv.slm_n > max_step)
        throw std::invalid_argument("step count " + std::to_string(inv.slm_n) +
                                    " exceeds the resolution bound " + std::to_string(max_step) +
                                    " for " + std::to_string(inv.rows) + " pixel rows");

    const auto target =
        qwalk::prepare_step_state(inv.slm_n, initial_from(inv), protocol_from(inv));
    const auto plan = qwalk::decompose_step_state(target);
    const int rpm = inv.rows_per_mode > 0
                        ? inv.rows_per_mode
                        : std::max(1, inv.rows / (4 * inv.slm_n + 1) / 2 * 2);
    const auto mask = qwalk::synthesize_mask(plan.target, rpm, inv.cols, inv.period, inv.rows);
    const auto recovered = qwalk::extract_order(qwalk::far_field(mask), 1, mask);
    const auto prepared =
        qwalk::conditional_rotation(qwalk::superposition_state(recovered), plan.schedule);
    const double fid = qwalk::fidelity(prepared, target);

    emit(inv, "mask.pgm", qwalk::pgm_bytes(mask));

    json report;
    report["invocation"] = line.str();
    report["n"] = inv.slm_n;
    report["rows"] = mask.rows;
    report["cols"] = mask.cols;
    report["grating_period"] = mask.grating_period;
    report["rows_per_mode"] = mask.rows_per_mode;
    report["slit_count"] = mask.slit_layout.size();
    report["max_step_for_resolution"] = max_step;
    report["fidelity"] = fid;
    emit(inv, "slm_report.json", report.dump(2) + "\n");
}

void cmd_hybrid(const Invocation& inv) {
    InvLine line("hybrid");
    line.add("--n", inv.hybrid_n);
    append_protocol_flags(line, inv);
    append_coin_flags(line, inv);
    line.globals(inv);

    const qwalk::InitialCondition init = initial_from(inv);
    qwalk::SourceConfig cfg;
    cfg.a = init.coin.h;
    cfg.b = init.coin.v;
    cfg.n = inv.hybrid_n;
    cfg.protocol = protocol_from(inv);
    const auto stepped = qwalk::nonlocal_step(qwalk::make_hybrid_state(cfg));
    const auto cd = qwalk::coincidence_distribution(stepped);
    const double entropy = qwalk::entanglement_entropy(stepped);

    // Equivalence check: the coincidence marginal of the dismembered
    // (n, then one more step) evolution must be the ordinary (n+1)-step
    // position distribution.
    const auto reference = qwalk::probability_distribution(
        qwalk::evolve(init, cfg.protocol, inv.hybrid_n + 1));
    double max_diff = 0.0;
    auto probe = [&](const std::map<int, double>& a, const std::map<int, double>& b) {
        for (const auto& [j, p] : a) {
            const auto it = b.find(j);
            max_diff = std::max(max_diff, std::abs(p - (it == b.end() ? 0.0 : it->second)));
        }
    };
    probe(cd.marginal, reference);
    probe(reference, cd.marginal);
    const bool pass = max_diff <= 1e-12;

    std::ostringstream csv;
    csv << "# " << line.str() << "\n";
    csv << "# entanglement_entropy_bits = " << qwalk::format_double(entropy) << "\n";
    csv << "pol,j,probability\n";
    for (const auto& [j, p] : cd.conditional_h)
        csv << "H," << j << "," << qwalk::format_double(p) << "\n";
    for (const auto& [j, p] : cd.conditional_v)
        csv << "V," << j << "," << qwalk::format_double(p) << "\n";
    emit(inv, "coincidence.csv", csv.str());

    std::ostringstream mar;
    mar << "# " << line.str() << "\n";
    mar << "j,P\n";
    for (const auto& [j, p] : cd.marginal) mar << j << "," << qwalk::format_double(p) << "\n";
    emit(inv, "hybrid_marginal.csv", mar.str());

    json report;
    report["invocation"] = line.str();
    report["n"] = inv.hybrid_n;
    report["entanglement_entropy_bits"] = entropy;
    report["equivalence"] = {{"pass", pass},
                             {"max_abs_difference", max_diff},
                             {"tolerance", 1e-12},
                             {"reference_steps", inv.hybrid_n + 1}};
    report["verdict"] = pass ? "PASS" : "FAIL";
    emit(inv, "hybrid_report.json", report.dump(2) + "\n");
}

void cmd_arch(const Invocation& inv) {
    InvLine line("arch");
    line.add("--target-n", inv.target_n)
        .add("--eta", inv.eta)
        .add("--outcoupling", inv.outcoupling)
        .add("--rep-rate", inv.rep_rate)
        .add("--mean-photon", inv.mean_photon)
        .add("--transmission", inv.transmission)
        .add("--min-rate", inv.min_rate)
        .add("--outcouple-first", inv.outcouple_first);
    line.globals(inv);

    qwalk::TemporalLoopParams loop;
    loop.eta = inv.eta;
    loop.outcoupling = inv.outcoupling;
    loop.rep_rate = inv.rep_rate;
    loop.mean_photon = inv.mean_photon;
    loop.outcouple_before_loss = inv.outcouple_first;
    qwalk::SpatialCascadeParams cascade;
    cascade.per_step_transmission = inv.transmission;
    const auto rows = qwalk::feasibility_report(loop, cascade, inv.target_n, inv.min_rate);

    std::ostringstream csv;
    csv << "# " << line.str() << "\n";
    csv << "# eta=" << qwalk::format_double(loop.eta)
        << " outcoupling=" << qwalk::format_double(loop.outcoupling)
        << " rep_rate=" << qwalk::format_double(loop.rep_rate)
        << " mean_photon=" << qwalk::format_double(loop.mean_photon)
        << " transmission=" << qwalk::format_double(cascade.per_step_transmission)
        << " min_rate=" << qwalk::format_double(inv.min_rate) << "\n";
    csv << "# multiphoton_fraction=" << qwalk::format_double(qwalk::multiphoton_fraction(
               loop.mean_photon))
        << "\n";
    csv << "n,modes_spatial,modes_temporal,rate_spatial,rate_temporal,feasible_spatial,"
           "feasible_temporal\n";
    for (const auto& r : rows)
        csv << r.n << "," << r.modes_spatial << "," << r.modes_temporal << ","
            << qwalk::format_double(r.rate_spatial) << "," << qwalk::format_double(r.rate_temporal)
            << "," << (r.feasible_spatial ? 1 : 0) << "," << (r.feasible_temporal ? 1 : 0) << "\n";
    emit(inv, "feasibility.csv", csv.str());
}

// ---------- argument plumbing ----------

void build_app(CLI::App& app, Invocation& inv) {
    app.require_subcommand(1);
    app.add_option("--out", inv.out_dir, "output directory (created if missing)");
    app.add_option("--config", inv.config_path, "flat key=value config file; explicit flags win");
    app.add_option("--threads", inv.threads, "worker threads for grid scans")
        ->check(CLI::Range(1, 256));
    app.add_option("--seed", inv.seed, "random seed (recorded; commands are deterministic)");

    const auto protocol_names =
        CLI::IsMember({"standard", "splitstep", "noncommuting", "hadamard"});
    const auto axis_names = CLI::IsMember({"x", "y", "z"});

    auto add_protocol_flags = [&](CLI::App* sub) {
        sub->add_option("--protocol", inv.protocol, "coin protocol")->check(protocol_names);
        sub->add_option("--axis", inv.axis, "rotation axis for the standard protocol")
            ->check(axis_names);
        sub->add_option("--theta", inv.theta, "rotation angle (standard / noncommuting)");
        sub->add_option("--theta1", inv.theta1, "first split-step angle");
        sub->add_option("--theta2", inv.theta2, "second split-step angle");
        sub->add_option("--phi", inv.phi, "x-rotation angle (noncommuting)");
    };
    auto add_coin_flags = [&](CLI::App* sub) {
        sub->add_option("--a-re", inv.a_re, "initial coin <H| amplitude, real part");
        sub->add_option("--a-im", inv.a_im, "initial coin <H| amplitude, imaginary part");
        sub->add_option("--b-re", inv.b_re, "initial coin <V| amplitude, real part");
        sub->add_option("--b-im", inv.b_im, "initial coin <V| amplitude, imaginary part");
        sub->add_flag("--symmetric", inv.symmetric,
                      "start from the chirality-balanced coin (|H>+i|V>)/sqrt(2)");
    };

    CLI::App* walk = app.add_subcommand("walk", "evolve a walker and emit its distribution");
    add_protocol_flags(walk);
    add_coin_flags(walk);
    walk->add_option("--steps", inv.steps, "number of walk steps")->check(CLI::Range(0, 100000));
    walk->add_option("--site", inv.site, "initial lattice site");

    CLI::App* bands = app.add_subcommand("bands", "gap map over a protocol family");
    bands->add_option("--family", inv.family, "protocol family to scan")
        ->check(CLI::IsMember({"standard", "splitstep", "noncommuting"}));
    bands->add_option("--res", inv.res, "parameter-grid resolution per axis");
    bands->add_option("--k-res", inv.k_res, "momentum samples per gap scan")
        ->check(CLI::Range(3, 100000));

    CLI::App* dirac = app.add_subcommand("dirac", "locate gap closures of the two-angle family");
    dirac->add_option("--res", inv.res, "scan resolution (>= 64)");

    CLI::App* zak = app.add_subcommand("zak", "geometric-phase landscape over a family");
    zak->add_option("--family", inv.zak_family, "two-parameter family")
        ->check(CLI::IsMember({"splitstep", "noncommuting"}));
    zak->add_option("--method", inv.method, "evaluation pipeline")
        ->check(CLI::IsMember({"wilson", "connection", "integrand", "analytic"}));
    zak->add_option("--res", inv.zak_res, "landscape resolution per axis");
    zak->add_option("--samples", inv.samples, "momentum samples per phase evaluation");

    CLI::App* slm = app.add_subcommand("slm", "synthesize a preparation mask and score it");
    slm->add_option("--n", inv.slm_n, "walk step count of the target state");
    slm->add_option("--rows", inv.rows, "modulator pixel rows");
    slm->add_option("--cols", inv.cols, "modulator pixel columns");
    slm->add_option("--period", inv.period, "blazed grating period in pixels");
    slm->add_option("--rows-per-mode", inv.rows_per_mode, "slit height (0 = automatic)");
    add_protocol_flags(slm);
    add_coin_flags(slm);

    CLI::App* hybrid =
        app.add_subcommand("hybrid", "non-local two-photon step and coincidence readout");
    hybrid->add_option("--n", inv.hybrid_n, "steps baked into the source state");
    add_protocol_flags(hybrid);
    add_coin_flags(hybrid);

    CLI::App* arch = app.add_subcommand("arch", "multiplexing feasibility table");
    arch->add_option("--target-n", inv.target_n, "maximum step count tabulated");
    arch->add_option("--eta", inv.eta, "round-trip survival probability");
    arch->add_option("--outcoupling", inv.outcoupling, "per-step detection probability");
    arch->add_option("--rep-rate", inv.rep_rate, "source pulses per second");
    arch->add_option("--mean-photon", inv.mean_photon, "mean photons per pulse");
    arch->add_option("--transmission", inv.transmission, "spatial per-step transmission");
    arch->add_option("--min-rate", inv.min_rate, "feasibility threshold, events/second");
    arch->add_flag("--outcouple-first", inv.outcouple_first,
                   "sample the outcoupler before the round-trip loss");

    for (CLI::App* sub : {walk, bands, dirac, zak, slm, hybrid, arch}) sub->fallthrough();
}

// Defaults that depend on the command: the preparation and two-photon
// pipelines default to the balanced coin, the plain walk to the standard
// rotation protocol. Applied only when neither flag nor config chose one.
void apply_command_defaults(const CLI::App* sub, Invocation& inv) {
    const std::string name = sub->get_name();
    if (name == "slm" || name == "hybrid") {
        const CLI::Option* opt = sub->get_option_no_throw("--protocol");
        if (opt != nullptr && opt->count() == 0) inv.protocol = "hadamard";
    }
}

void dispatch(const std::string& command, const Invocation& inv) {
    if (command == "walk")
        cmd_walk(inv);
    else if (command == "bands")
        cmd_bands(inv);
    else if (command == "dirac")
        cmd_dirac(inv);
    else if (command == "zak")
        cmd_zak(inv);
    else if (command == "slm")
        cmd_slm(inv);
    else if (command == "hybrid")
        cmd_hybrid(inv);
    else
        cmd_arch(inv);
}

int run(int argc, char** argv) {
    // Pass 1: parse the command line alone to learn the active command and
    // which options the user set explicitly.
    Invocation probe;
    CLI::App app1{"photonic discrete-time walk toolkit"};
    build_app(app1, probe);
    try {
        app1.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app1.exit(e);
    } catch (const CLI::ParseError& e) {
        app1.exit(e);
        return 2;
    }
    CLI::App* sub1 = app1.get_subcommands().front();

    if (probe.config_path.empty()) {
        apply_command_defaults(sub1, probe);
        dispatch(sub1->get_name(), probe);
        return 0;
    }

    // Pass 2: append config pairs for options the user did not set, then
    // re-parse, so precedence is CLI flag > config value > built-in default.
    std::map<std::string, std::string> kv;
    try {
        kv = qwalk::parse_config_file(probe.config_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::vector<std::string> tokens(argv + 1, argv + argc);
    for (const auto& [key, value] : kv) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub1->get_option_no_throw(flag);
        const CLI::Option* user_opt = opt ? opt : app1.get_option_no_throw(flag);
        if (user_opt == nullptr) {
            std::cerr << "config: ignoring unknown key '" << key << "'\n";
            continue;
        }
        if (user_opt->count() > 0) continue;  // explicit flag wins
        tokens.push_back(flag + "=" + value);
    }

    Invocation inv;
    CLI::App app2{"photonic discrete-time walk toolkit"};
    build_app(app2, inv);
    std::vector<const char*> cargv;
    cargv.push_back(argv[0]);
    for (const auto& t : tokens) cargv.push_back(t.c_str());
    try {
        app2.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app2.exit(e);
    } catch (const CLI::ParseError& e) {
        app2.exit(e);
        return 2;
    }
    CLI::App* sub2 = app2.get_subcommands().front();
    apply_command_defaults(sub2, inv);
    dispatch(sub2->get_name(), inv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
