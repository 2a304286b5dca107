#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "padic_expsums/characters.hpp"
#include "padic_expsums/errors.hpp"
#include "padic_expsums/expsums.hpp"
#include "padic_expsums/harness.hpp"
#include "padic_expsums/modarith.hpp"
#include "padic_expsums/padic.hpp"
#include "padic_expsums/charsums.hpp"
#include "padic_expsums/statphase.hpp"

using namespace padic;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string num(cplx z) { return num(z.real()) + (z.imag() < 0 || std::signbit(z.imag()) ? " - " : " + ") + num(std::abs(z.imag())) + "i"; }

std::string quarter_str(EpsilonFactor e)
{
    static const char* names[] = {"1", "i", "-1", "-i"};
    return names[e.quarter()];
}

// Named integer parameters of `eval`, kept as text so unset ones can be told apart.
class Params {
public:
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    bool has(const std::string& name) const { return values_.count(name) != 0; }

    i64 get(const std::string& name) const
    {
        auto it = values_.find(name);
        if (it == values_.end()) throw InvalidArgument("missing --" + name);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw InvalidArgument("--" + name + " must be an integer, got '" + it->second + "'");
        }
    }

    i64 get(const std::string& name, i64 fallback) const { return has(name) ? get(name) : fallback; }

    u64 positive(const std::string& name) const
    {
        const i64 v = get(name);
        if (v <= 0) throw InvalidArgument("--" + name + " must be positive, got " + std::to_string(v));
        return static_cast<u64>(v);
    }

    u64 positive(const std::string& name, u64 fallback) const { return has(name) ? positive(name) : fallback; }

    u64 odd_prime(const std::string& name = "p") const
    {
        const u64 p = positive(name);
        if (p < 3 || !is_prime(p)) throw InvalidArgument("--" + name + " must be an odd prime, got " + std::to_string(p));
        return p;
    }

    unsigned exponent(const std::string& name, unsigned min) const
    {
        const u64 v = positive(name);
        if (v < min || v > 62)
            throw InvalidArgument("--" + name + " must lie in [" + std::to_string(min) + ", 62], got " + std::to_string(v));
        return static_cast<unsigned>(v);
    }

private:
    std::map<std::string, std::string> values_;
};

SqrtBranch branch_from(const Params& ps, u64 p)
{
    return ps.has("branch-mask") ? SqrtBranch::from_mask(p, static_cast<u64>(ps.get("branch-mask")))
                                 : SqrtBranch::canonical(p);
}

MultChar char_from(const Params& ps)
{
    return MultChar(ps.odd_prime(), ps.exponent("n", 2), ps.positive("k", 1));
}

void line(const std::string& key, const std::string& value) { std::cout << key << " = " << value << '\n'; }

// Small enough to run the O(p^{2n+r}) literal sums.
bool literal_ok(u64 p, unsigned n, unsigned r) { return std::pow(static_cast<double>(p), 2.0 * n + r) <= 2e7; }

int eval_kind(const std::string& kind, const Params& ps)
{
    if (kind == "ramanujan") {
        const i64 u = ps.get("u");
        const u64 c = ps.positive("c");
        line("value", std::to_string(ramanujan_closed(u, c)));
        line("brute", num(ramanujan_brute(u, c).value));
    } else if (kind == "kloosterman") {
        const u64 p = ps.odd_prime();
        const PrimePowerModulus q(p, ps.exponent("n", 1));
        const i64 a = ps.get("a"), b = ps.get("b");
        const SqrtBranch branch = branch_from(ps, p);
        const cplx brute = kloosterman_brute(a, b, q.value()).value;
        if (q.n() >= 2 && a % static_cast<i64>(p) != 0 && b % static_cast<i64>(p) != 0) {
            const auto t = kloosterman_closed_terms(a, b, q, branch);
            line("value", num(t.value));
            line("brute", num(brute));
            if (t.vanishes) {
                line("closed", "0 (ab is not a square mod p)");
            } else {
                std::ostringstream os;
                os << num(t.scale) << " * [" << quarter_str(t.eps[0]) << " " << t.phases[0].to_string() << " + "
                   << quarter_str(t.eps[1]) << " " << t.phases[1].to_string() << "]";
                line("closed", os.str());
                line("sqrt_ab", std::to_string(t.root));
                line("rho", std::to_string(t.rho));
            }
        } else {
            line("value", num(kloosterman_prime_power(a, b, q, branch)));
            line("brute", num(brute));
        }
    } else if (kind == "czero") {
        const u64 p = ps.odd_prime();
        const unsigned n = ps.exponent("n", 2);
        const unsigned r = ps.exponent("r", 1);
        const i64 l1 = ps.get("l1"), l2 = ps.get("l2");
        line("value", std::to_string(C_zero_closed(p, n, r, l1, l2)));
        if (literal_ok(p, n, r) && r <= n) {
            MultChar chi(p, n, ps.positive("k", 1));
            line("sum", num(C_def({chi, r, ps.positive("c", 1), 1, 0, l1, l2})));
        }
    } else if (kind == "gsum") {
        MultChar chi = char_from(ps);
        const unsigned r = ps.exponent("r", 1);
        if (r > chi.n()) throw InvalidArgument("--r must not exceed --n");
        GSumParams g{chi, r, ps.positive("c", 1), ps.get("m"), ps.get("l")};
        if (g.c % chi.p() == 0) throw InvalidArgument("--c must be prime to p");
        const cplx kl = G_kloosterman(g);
        line("value", num(kl));
        if (literal_ok(chi.p(), chi.n(), r)) {
            line("triple_sum", num(G_def(g)));
            line("gauss_normalized", num(G_tau(g)));
        }
        line("vanishes_predicted", g_vanishes_predicted(g) ? "yes" : "no");
        if (r >= 2 && !g_vanishes_predicted(g)) {
            const Calibration cal = calibrate();
            const GClosedForm form = cal.selected ? cal.selected->form : GClosedForm::Corrected;
            const u64 lift = cal.selected ? cal.selected->alpha_lift : 0;
            const u64 mask = cal.selected ? cal.selected->branch_mask : 0;
            const SqrtBranch branch =
                ps.has("branch-mask") ? branch_from(ps, chi.p())
                                      : SqrtBranch::from_mask(chi.p(), mask % (u64{1} << SqrtBranch::canonical(chi.p()).class_count()));
            line("closed", num(G_closed(g, form, branch, lift)) + " (" + to_string(form) + ")");
            line("closed_as_printed", num(G_closed(g, GClosedForm::AsPrinted, branch, lift)));
            line("closed_valid", g_closed_valid(chi.p(), chi.n()) ? "yes" : "no");
        }
    } else if (kind == "csum") {
        MultChar chi = char_from(ps);
        const unsigned r = ps.exponent("r", 1);
        CSumParams cp{chi, r, ps.positive("c", 1), ps.positive("d", 1), ps.get("mt", 0), ps.get("l1"), ps.get("l2")};
        line("value", num(C_def(cp)));
        if (2 * r >= chi.n() && r < chi.n()) {
            const CSupport s = C_support_bound(cp);
            line("vanishes_predicted", s.vanishes_predicted ? "yes" : "no");
            line("bound", num(s.bound));
            line("omega", std::to_string(s.omega));
            line("stationary_exists", s.stationary_exists ? "yes" : "no");
        }
    } else if (kind == "kfull") {
        MultChar chi = char_from(ps);
        const int sign = static_cast<int>(ps.get("sign", 1));
        if (sign != 1 && sign != -1) throw InvalidArgument("--sign must be 1 or -1");
        const KFull kf = K_full(chi, ps.get("mt", 0), ps.get("l1"), ps.get("l2"), ps.positive("c", 1),
                                ps.positive("d", 1), ps.exponent("r", 1), sign);
        line("value", num(kf.defining));
        line("factored", num(kf.factored));
        line("factored_flipped", num(kf.factored_flipped));
    } else if (kind == "postnikov" || kind == "alpha") {
        MultChar chi = char_from(ps);
        line("alpha", std::to_string(chi.alpha().value()));
        const u64 q = chi.modulus().value();
        if (ps.has("m")) {
            const u64 m = reduce(ps.get("m"), q);
            if (m % chi.p() != 1) throw InvalidArgument("--m must be 1 mod p");
            line("holds", chi.postnikov_holds(m) ? "yes" : "no");
        } else {
            u64 misses = 0;
            for (u64 m = 1; m < q; m += chi.p())
                if (!chi.postnikov_holds(m)) ++misses;
            line("mismatches", std::to_string(misses));
        }
    } else if (kind == "char") {
        MultChar chi = char_from(ps);
        const auto v = chi(ps.get("u"));
        line("value", v ? "e(" + v->to_string() + ")" : "0");
        line("complex", num(chi.value(ps.get("u"))));
    } else if (kind == "gauss") {
        MultChar chi = char_from(ps);
        const cplx tau = gauss_sum(chi);
        line("value", num(tau));
        line("abs", num(std::abs(tau)));
        line("expected_abs", num(std::pow(static_cast<double>(chi.p()), chi.n() / 2.0)));
    } else if (kind == "statphase") {
        const u64 p = ps.odd_prime();
        const unsigned n = ps.exponent("n", 2);
        const auto battery = builtin_battery(p, n);
        const i64 member = ps.get("member");
        if (member < 0 || static_cast<u64>(member) >= battery.size())
            throw InvalidArgument("--member must lie in [0, " + std::to_string(battery.size()) + ")");
        const PhaseData& d = battery[static_cast<std::size_t>(member)];
        line("family", d.family);
        line("instance", d.instance);
        const cplx direct = direct_sum(d);
        line("direct", num(direct));
        try {
            const ReducedSum red = d.kind == ReductionKind::Linear ? reduce_linear(d) : reduce_quadratic(d);
            line("value", num(red.value));
            line("stationary_points", std::to_string(red.stationary_points.size()));
        } catch (const RegimeViolation& e) {
            line("value", std::string("regime-excluded: ") + e.what());
        }
        const double bound = second_derivative_bound(d);
        line("bound", num(bound));
        line("ratio", num(std::abs(direct) / bound));
        const SdtContractReport c = sdt_contract(d);
        line("contract", std::string(c.holds ? "held" : "failed") + " ord_phi2=[" + std::to_string(c.min_ord) + "," +
                             std::to_string(c.max_ord) + "]");
    } else if (kind == "reciprocity") {
        const u64 p = ps.odd_prime();
        const PrimePowerModulus q(p, ps.exponent("n", 1));
        const bool ok = verify_reciprocity_instances(ps.get("m"), ps.get("l"), ps.get("a"), ps.get("b"),
                                                     ps.positive("c"), q, ps.exponent("r", 1)) &&
                        verify_reciprocity(ps.get("m"), ps.get("a"), ps.positive("c"), q);
        line("value", ok ? "holds" : "fails");
        if (!ok) return kExitFail;
    } else if (kind == "plog") {
        const u64 p = ps.odd_prime();
        line("value", std::to_string(plog(static_cast<u64>(reduce(ps.get("x"), checked_pow(p, ps.exponent("n", 1)))), p,
                                          ps.exponent("n", 1))));
    } else if (kind == "psqrt") {
        const u64 p = ps.odd_prime();
        line("value", std::to_string(psqrt(ps.get("x"), p, ps.exponent("n", 1), branch_from(ps, p))));
    } else if (kind == "epsilon") {
        const i64 s = ps.get("s");
        if (s != 0 && s != 1) throw InvalidArgument("--s must be 0 or 1");
        line("value", quarter_str(epsilon(ps.get("a"), ps.odd_prime(), static_cast<unsigned>(s))));
    } else if (kind == "legendre") {
        line("value", std::to_string(legendre(ps.get("a"), ps.odd_prime())));
    } else if (kind == "inv") {
        line("value", std::to_string(inv_mod(ps.get("x"), ps.positive("m"))));
    } else {
        throw InvalidArgument("unknown eval kind '" + kind + "'");
    }
    return 0;
}

const std::vector<std::string> kEvalKinds{"kloosterman", "ramanujan", "czero",   "gsum",    "csum",     "kfull",
                                          "postnikov",   "alpha",     "char",    "gauss",   "statphase", "reciprocity",
                                          "plog",        "psqrt",     "epsilon", "legendre", "inv"};

const std::vector<std::string> kEvalParams{"p", "n", "r", "k", "c", "d", "a", "b", "m", "l", "l1", "l2",
                                           "mt", "u", "x", "s", "member", "sign", "branch-mask"};

// Flags shared by verify and sweep, each mapped to a config key.
struct GridFlags {
    std::vector<std::pair<CLI::Option*, std::string>> options;
    std::map<std::string, std::string> values;
    std::string n_exact;
    CLI::Option* n_option = nullptr;
    std::string config_path;
    std::string out_path;

    void add(CLI::App* sub)
    {
        auto opt = [&](const std::string& flags, const std::string& key, const std::string& help) {
            options.emplace_back(sub->add_option(flags, values[key], help), key);
        };
        opt("--seed", "seed", "Sampling seed");
        opt("--budget", "budget", "Maximum summand evaluations (default 1e8 or PADIC_EXPSUMS_BUDGET)");
        opt("--tolerance", "tolerance", "Absolute tolerance for every floating comparison");
        opt("--format", "format", "csv or json");
        opt("--workers", "workers", "Worker threads");
        opt("--p,--primes", "primes", "Comma-separated odd primes");
        opt("--n-min", "n_min", "Smallest exponent");
        opt("--n-max", "n_max", "Largest exponent");
        opt("--r-min", "r_min", "Smallest r");
        opt("--r-max", "r_max", "Largest r");
        opt("--c-list", "c_list", "Comma-separated c values");
        opt("--d-rule", "d_rule", "one, c or all");
        opt("--samples", "samples", "Random points per sampled cell");
        opt("--max-pairs", "max_pairs", "Cap on (l1, l2) pairs per (p, n, r)");
        opt("--exhaustive-threshold", "exhaustive_threshold", "Largest grid walked exhaustively");
        n_option = sub->add_option("--n", n_exact, "Single exponent (sets --n-min and --n-max)");
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--out", out_path, "Output file (default standard output)");
    }

    SweepConfig resolve() const
    {
        SweepConfig cfg;
        cfg.budget = default_budget();
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (n_option->count()) {
            apply_setting(cfg, "n_min", n_exact);
            apply_setting(cfg, "n_max", n_exact);
        }
        for (const auto& [option, key] : options)
            if (option->count()) apply_setting(cfg, key, values.at(key));
        return cfg;
    }
};

int emit(const std::vector<ResultRow>& rows, const SweepConfig& cfg, const std::string& out_path)
{
    if (out_path.empty()) {
        write_rows(std::cout, rows, cfg.format);
        std::cout.flush();
        return std::cout ? 0 : kExitUsage;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return kExitUsage;
    }
    write_rows(out, rows, cfg.format);
    out.close();
    if (!out) {
        std::cerr << "error: write to " << out_path << " failed\n";
        return kExitUsage;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact exponential sums modulo odd prime powers"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "Evaluate one sum and print it");
    std::string kind;
    eval->add_option("kind", kind, "What to evaluate")->required()->check(CLI::IsMember(kEvalKinds));
    std::map<std::string, std::string> eval_values;
    std::vector<std::pair<CLI::Option*, std::string>> eval_options;
    for (const auto& name : kEvalParams)
        eval_options.emplace_back(eval->add_option("--" + name, eval_values[name]), name);
    // accepted for symmetry with verify and sweep
    std::string ignored;
    for (const char* flag : {"--seed", "--budget", "--tolerance", "--format", "--workers", "--config"})
        eval->add_option(flag, ignored);

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    std::vector<std::string> suite_choices = suite_names();
    suite_choices.push_back("all");
    verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_choices));
    GridFlags verify_flags;
    verify_flags.add(verify);

    auto* sweep = app.add_subcommand("sweep", "Run a measurement sweep");
    std::string measurement;
    sweep->add_option("measurement", measurement, "Measurement name")
        ->required()
        ->check(CLI::IsMember(measurement_names()));
    GridFlags sweep_flags;
    sweep_flags.add(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (eval->parsed()) {
            std::map<std::string, std::string> given;
            for (const auto& [option, name] : eval_options)
                if (option->count()) given[name] = eval_values[name];
            return eval_kind(kind, Params(given));
        }
        GridFlags& flags = verify->parsed() ? verify_flags : sweep_flags;
        const SweepConfig cfg = flags.resolve();
        if (verify->parsed()) {
            const auto rows = run_suite(suite, cfg);
            const int wrote = emit(rows, cfg, flags.out_path);
            const Summary s = summarize(rows);
            std::cerr << summary_line("verify " + suite, s) << '\n';
            if (wrote) return wrote;
            return s.fail == 0 ? 0 : kExitFail;
        }
        const auto rows = run_measurement(measurement, cfg);
        const int wrote = emit(rows, cfg, flags.out_path);
        std::cerr << summary_line("sweep " + measurement, summarize(rows)) << '\n';
        return wrote;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return eval->parsed() || dynamic_cast<const InvalidArgument*>(&e) ? kExitUsage : kExitFail;
    }
}
