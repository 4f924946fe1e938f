// lpsum: command-line front end over the library.
// Exit status: 0 all assertions hold, 1 an assertion failed, 2 bad input or a numerical error.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "lpsum/acceptance.hpp"
#include "lpsum/asplund.hpp"
#include "lpsum/convolve.hpp"
#include "lpsum/legendre.hpp"
#include "lpsum/quermass.hpp"
#include "lpsum/sets.hpp"
#include "lpsum/verify.hpp"

using namespace lps;

namespace {

struct Params {
    double p = 1, s = 0, t = 0.5, alpha = 0.5, beta = 0.5, gamma = 1;
    int j = 0, k = 1, dim = 1, trials = 50, subspaces = 64, threads = 1;
    std::uint64_t seed = 1;
    std::string out, report, method = "both", route = "density", functional = "volume";
    bool base = false, compare = false;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

GridFn load(const std::string& path, Kind want) {
    GridFn f = read_grid(path);
    if (f.kind != want)
        throw UsageError(path + ": expected a " + (want == Kind::base ? "base" : "density") + " grid");
    return f;
}

void require_finite(const GridFn& f, const char* what) {
    for (double v : f.values)
        if (std::isnan(v) || v == -kInf) throw DomainError(std::string("non-finite values in ") + what);
}

void save(const GridFn& f, const std::string& path, const char* what) {
    require_finite(f, what);
    if (!path.empty()) write_grid(f, path);
}

int finish_report(const VerificationReport& rep, const Params& P) {
    if (!P.report.empty()) spit(P.report, rep.to_csv());
    std::printf("%s\n", rep.summary().c_str());
    std::printf("threads=%d\n", P.threads);
    return rep.passed() ? 0 : 1;
}

std::vector<Subspace> subspaces_for(int n, int j, const Params& P) {
    if (j == 0) return {};
    return sample_grassmannian(n, n - j, P.subspaces, P.seed);
}

int cmd_transform(const std::string& in, const Params& P) {
    GridFn u = load(in, Kind::base);
    GridFn us = legendre_transform(u);
    save(us, P.out, "transform");
    GridFn w = biconjugate(u);
    double err = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!is_inf(u[i]) && !is_inf(w[i])) err = std::max(err, std::fabs(w[i] - u[i]));
    std::printf("dual grid %d nodes per axis, max |u** - u| = %.3e\n", us.shape[0], err);
    return 0;
}

int cmd_conv(const std::string& a, const std::string& b, const Params& P, bool infsup) {
    GridFn f = load(a, Kind::density), g = load(b, Kind::density);
    ConvolveParams c = ConvolveParams::with_t(P.p, P.s, P.t);
    GridFn h;
    if (P.route == "base") {
        SConcaveFn fb = to_base(f, P.s), gb = to_base(g, P.s);
        h = infsup ? lps_infsup_convolution(fb, gb, c) : lps_sup_convolution(fb, gb, c);
    } else {
        h = infsup ? lps_infsup_convolution(f, g, c) : lps_sup_convolution(f, g, c);
    }
    save(h, P.out, "convolution");
    std::printf("total mass %.10g\n", total_mass(h));
    return 0;
}

int cmd_asplund(const std::string& a, const std::string& b, const Params& P) {
    SConcaveFn f = to_base(load(a, Kind::density), P.s), g = to_base(load(b, Kind::density), P.s);
    SConcaveFn sum = P.p >= 1 ? lps_asplund_sum_pge1(f, g, P.p, 1 - P.t, P.t)
                              : lps_asplund_sum_plt1(f, g, P.p, 1 - P.t, P.t);
    GridFn h = from_base(sum);
    save(h, P.out, "Asplund sum");
    std::printf("total mass %.10g\n", total_mass(h));
    if (!P.compare) return 0;
    return finish_report(compare_convolution_vs_asplund(f, g, P.p, P.s, P.t, P.seed), P);
}

int cmd_sets(const std::string& a, const std::string& b, const Params& P) {
    SupportFn K = SupportFn::from_table(slurp(a)), L = SupportFn::from_table(slurp(b));
    if (K.dim != 2 || L.dim != 2) throw UsageError("sets works on planar support tables");
    SupportFn S = firey_sum_bodies(K, L, P.p, P.alpha, P.beta);
    if (!P.out.empty()) spit(P.out, S.to_table());
    std::printf("area %.10g\n", polygon_area(wulff_polygon(S)));
    if (P.p >= 1) {
        std::printf("V_p(K,L) %.10g\n", lp_mixed_area(wulff_polygon(K), wulff_polygon(L), P.p));
    }
    return 0;
}

int cmd_project(const std::string& in, const Params& P) {
    GridFn f = read_grid(in);
    if (P.k < 1 || P.k > f.dim) throw UsageError("need 1 <= k <= dim");
    Subspace H = sample_grassmannian(f.dim, P.k, 1, P.seed)[0];
    GridFn r = f.kind == Kind::base ? project_base(f, H) : project_fn(f, H);
    save(r, P.out, "projection");
    std::printf("%s", subspaces_to_table({H}).c_str());
    return 0;
}

int cmd_quermass(const std::string& in, const Params& P) {
    GridFn f = load(in, Kind::density);
    if (P.j < 0 || P.j >= f.dim) throw UsageError("need 0 <= j < dim");
    auto hs = P.j == 0 ? std::vector<Subspace>{Subspace::full(f.dim)} : subspaces_for(f.dim, P.j, P);
    McEstimate e = quermass_fn(f, P.j, hs);
    std::printf("W_%d %.10g +- %.3g\n", P.j, e.value, e.stderr_);
    return std::isfinite(e.value) ? 0 : 2;
}

int cmd_mixed(const std::string& a, const std::string& b, const Params& P) {
    SConcaveFn f = to_base(load(a, Kind::density), P.s), g = to_base(load(b, Kind::density), P.s);
    f.amplitude = g.amplitude = 1;
    auto hs = subspaces_for(f.base.dim, P.j, P);
    const bool fd = P.method == "fd" || P.method == "both", in = P.method == "integral" || P.method == "both";
    MixedResult D, I;
    if (fd) {
        D = mixed_quermass_fd(f, g, P.p, P.j, {0.02, 0.01, 0.005}, hs);
        std::printf("fd %.10g +- %.3g\n", D.value, D.stderr_);
        if (!D.diagnostics.empty()) std::printf("  %s\n", D.diagnostics.c_str());
    }
    if (in) {
        MixedS m = mixed_quermass_s(f, g, P.p, P.j, hs);
        I = m.raw;
        std::printf("integral %.10g +- %.3g\n", I.value, I.stderr_);
        std::printf("  normalized %.10g, corollary form %.10g, literal R^n form %.10g\n", m.normalized, m.corollary,
                    I.literal);
    }
    if ((fd && !D.finite) || (in && !I.finite)) throw DomainError("non-finite mixed quermassintegral");
    if (!(fd && in)) return 0;
    const double band = std::max(0.05 * std::fabs(I.value), 3 * std::max(D.stderr_, I.stderr_));
    const bool ok = std::fabs(D.value - I.value) <= band;
    std::printf("consistency |fd - integral| = %.3g, band %.3g: %s\n", std::fabs(D.value - I.value), band,
                ok ? "ok" : "outside");
    return ok ? 0 : 1;
}

int cmd_verify(const std::string& suite, const Params& P) {
    VerificationReport rep;
    if (suite == "lp-bbl") {
        rep = verify_lp_bbl(P.trials, P.p, P.s, P.t, P.dim, P.seed);
    } else if (suite == "classic-bbl") {
        rep = verify_classic_bbl(P.trials, P.s, P.t, P.dim, P.seed);
    } else if (suite == "omega-bbl") {
        if (P.functional != "volume" && P.functional != "quermass1") throw UsageError("--functional volume|quermass1");
        SetFunctional Om = P.functional == "volume" ? SetFunctional::volume(2)
                                                    : SetFunctional::quermass(2, 1, 32, P.seed + 1);
        rep = verify_omega_bbl(P.trials, Om, P.p, P.alpha, P.gamma, P.t, 2, P.seed);
    } else if (suite == "lpgamma-bbl") {
        rep = verify_1d_lpgamma_bbl(P.trials, P.p, P.alpha, P.gamma, P.t, P.seed);
    } else if (suite == "quermass-bbl") {
        rep = verify_quermass_bbl(P.trials, P.p, P.alpha, P.gamma, P.t, P.j, P.seed);
    } else if (suite == "conv-concavity") {
        rep = verify_convolution_concavity(P.trials, P.p, P.s, P.beta, P.seed);
    } else if (suite == "coincide") {
        Box b = Box::cube(2, -4, 4, 129);
        std::mt19937_64 rng(P.seed);
        for (int i = 0; i < P.trials; ++i) {
            auto K = random_polygon(rng, 1, 2), L = random_polygon(rng, 1, 2);
            rep.merge(check_coincide(K, L, P.p, b, 1 - P.t, P.t));
        }
    } else if (suite == "asplund") {
        Box b = Box::cube(1, -6, 6, 257);
        std::mt19937_64 rng(P.seed);
        for (int i = 0; i < P.trials; ++i) {
            SConcaveFn f = random_s_concave(rng, b, P.s, 1, 3), g = random_s_concave(rng, b, P.s, 1, 3);
            rep.merge(compare_convolution_vs_asplund(f, g, P.p, P.s, P.t, (std::uint64_t)i));
        }
    } else if (suite == "bp") {
        if (P.dim != 2 && P.dim != 3) throw UsageError("bp needs --dim 2 or 3");
        Box b = P.dim == 2 ? Box::cube(2, -5, 5, 129) : Box::cube(3, -5, 5, 65);
        GridFn F(b, Kind::density);
        F.fill([](auto x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
        rep = blaschke_petkantschin_check(F, P.j, P.trials, P.seed);
    } else {
        throw UsageError("unknown suite " + suite);
    }
    return finish_report(rep, P);
}

int cmd_selftest(double scale, std::uint64_t seed, const std::vector<int>& only) {
    AcceptanceOptions opt;
    opt.trial_scale = scale;
    opt.seed = seed;
    opt.only = only;
    opt.on_result = [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
    };
    auto res = run_acceptance(opt);
    int bad = 0, expected = 0;
    for (const auto& r : res) {
        bad += r.unexpected_failure();
        expected += !r.pass && !r.expected_failure.empty();
    }
    std::printf("%zu criteria: %d unexpected failures, %d failures with a recorded reason\n", res.size(), bad,
                expected);
    return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L_{p,s} sums and convolutions of s-concave functions"};
    app.require_subcommand(1);
    Params P;
    app.add_option("--threads", P.threads, "OpenMP threads (default 1, serial)")->check(CLI::PositiveNumber);

    auto physics = [&](CLI::App* c) {
        c->add_option("--p", P.p, "L_p exponent");
        c->add_option("--s", P.s, "concavity exponent (inf for indicators)");
        c->add_option("--t", P.t, "weight t; the pair of weights is (1-t, t)");
    };
    auto sampling = [&](CLI::App* c) {
        c->add_option("--seed", P.seed, "random seed");
        c->add_option("--subspaces", P.subspaces, "Grassmannian samples");
    };

    std::string in1, in2, suite;
    auto* transform = app.add_subcommand("transform", "Legendre transform of a base grid");
    transform->add_option("input", in1)->required();
    transform->add_option("--out", P.out);

    auto* conv = app.add_subcommand("conv", "L_{p,s} supremal-convolution of two densities (p >= 1)");
    auto* infsup = app.add_subcommand("infsup", "L_{p,s} inf-sup-convolution of two densities (0 < p < 1)");
    auto* asplund = app.add_subcommand("asplund", "L_{p,s} Asplund sum of two densities");
    for (auto* c : {conv, infsup, asplund}) {
        c->add_option("f", in1)->required();
        c->add_option("g", in2)->required();
        c->add_option("--out", P.out);
        physics(c);
    }
    for (auto* c : {conv, infsup})
        c->add_option("--route", P.route, "density or base")->check(CLI::IsMember({"density", "base"}));
    asplund->add_flag("--compare", P.compare, "compare against the convolution");
    asplund->add_option("--report", P.report);
    asplund->add_option("--seed", P.seed);

    auto* sets = app.add_subcommand("sets", "Firey L_p sum of planar bodies given by support tables");
    sets->add_option("K", in1)->required();
    sets->add_option("L", in2)->required();
    sets->add_option("--p", P.p);
    sets->add_option("--alpha", P.alpha);
    sets->add_option("--beta", P.beta);
    sets->add_option("--out", P.out);

    auto* project = app.add_subcommand("project", "projection onto a random k-dimensional subspace");
    project->add_option("input", in1)->required();
    project->add_option("--k", P.k);
    project->add_option("--seed", P.seed);
    project->add_option("--out", P.out);

    auto* quermass = app.add_subcommand("quermass", "quermassintegral W_j of a density");
    quermass->add_option("input", in1)->required();
    quermass->add_option("--j", P.j);
    sampling(quermass);

    auto* mixed = app.add_subcommand("mixed", "first variation of the quermassintegral");
    mixed->add_option("f", in1)->required();
    mixed->add_option("g", in2)->required();
    physics(mixed);
    mixed->add_option("--j", P.j);
    mixed->add_option("--method", P.method)->check(CLI::IsMember({"fd", "integral", "both"}));
    sampling(mixed);

    auto* verify = app.add_subcommand("verify", "randomized inequality and identity suites");
    verify->add_option("suite", suite)
        ->required()
        ->check(CLI::IsMember({"lp-bbl", "classic-bbl", "omega-bbl", "lpgamma-bbl", "quermass-bbl", "conv-concavity",
                               "coincide", "asplund", "bp"}));
    physics(verify);
    verify->add_option("--alpha", P.alpha);
    verify->add_option("--beta", P.beta, "kernel exponent for conv-concavity");
    verify->add_option("--gamma", P.gamma);
    verify->add_option("--j", P.j);
    verify->add_option("--dim", P.dim);
    verify->add_option("--trials", P.trials)->check(CLI::PositiveNumber);
    verify->add_option("--seed", P.seed);
    verify->add_option("--functional", P.functional, "volume or quermass1 (omega-bbl)");
    verify->add_option("--report", P.report, "CSV output");

    auto* selftest = app.add_subcommand("selftest", "run every acceptance criterion with pinned seeds");
    double scale = 1;
    std::uint64_t st_seed = AcceptanceOptions{}.seed;
    std::vector<int> only;
    selftest->add_option("--scale", scale, "trial-count multiplier");
    selftest->add_option("--seed", st_seed);
    selftest->add_option("--only", only, "criterion ids");

    CLI11_PARSE(app, argc, argv);
    set_threads(P.threads);
    try {
        if (*transform) return cmd_transform(in1, P);
        if (*conv) return cmd_conv(in1, in2, P, false);
        if (*infsup) return cmd_conv(in1, in2, P, true);
        if (*asplund) return cmd_asplund(in1, in2, P);
        if (*sets) return cmd_sets(in1, in2, P);
        if (*project) return cmd_project(in1, P);
        if (*quermass) return cmd_quermass(in1, P);
        if (*mixed) return cmd_mixed(in1, in2, P);
        if (*verify) return cmd_verify(suite, P);
        if (*selftest) return cmd_selftest(scale, st_seed, only);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
