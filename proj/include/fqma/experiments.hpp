#pragma once

// Batch experiments behind the command-line driver: configuration
// validation, seeded trial loops and machine-readable reports.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqma/linalg.hpp"
#include "fqma/majorization.hpp"
#include "fqma/protocol.hpp"
#include "fqma/random.hpp"
#include "fqma/subspace.hpp"
#include "fqma/verifier.hpp"

namespace fqma::experiments {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// Invalid parameters or input files; maps to exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Check {
    std::size_t trial;
    std::string name;
    std::string anchor;  // what the check certifies, or "plumbing"
    double value;
    double threshold;
    bool pass;
};

struct RunReport {
    std::string command;
    json config = json::object();
    std::vector<Check> checks;
    json trace = json::array();  // per-t oracle verdicts (reduce) or spectra (spectrum)
    json data = json::object();  // command-specific extras
    double wall_time_s = 0.0;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    int exit_code() const { return all_pass() ? 0 : 1; }

    void add(std::size_t trial, std::string name, std::string anchor, double value, double threshold, bool pass) {
        checks.push_back({trial, std::move(name), std::move(anchor), value, threshold, pass});
    }

    json to_json(bool include_wall_time = true) const {
        json out;
        out["schema"] = kReportSchema;
        out["command"] = command;
        out["config"] = config;
        json cs = json::array();
        std::size_t passed = 0;
        for (const auto& c : checks) {
            cs.push_back({{"trial", c.trial},
                          {"name", c.name},
                          {"anchor", c.anchor},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"pass", c.pass}});
            passed += c.pass ? 1 : 0;
        }
        out["checks"] = std::move(cs);
        if (!trace.empty()) out["trace"] = trace;
        if (!data.empty()) out["data"] = data;
        out["summary"] = {{"checks", checks.size()}, {"passed", passed}, {"all_pass", all_pass()}};
        if (include_wall_time) out["wall_time_s"] = wall_time_s;
        return out;
    }

    /// Flat table: one row per check, then one row per trace entry.
    std::string to_csv() const {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "record,trial,name,anchor,value,threshold,pass,t,lambda1,lambda2,verdict,observational\n";
        for (const auto& c : checks)
            os << "check," << c.trial << ',' << c.name << ',' << c.anchor << ',' << c.value << ',' << c.threshold << ','
               << (c.pass ? "true" : "false") << ",,,,,\n";
        for (const auto& e : trace) {
            if (!e.contains("lambda1")) continue;
            os << "trace," << e.value("trial", 0) << ",,,,,," << e.value("t", 0) << ',' << e["lambda1"].get<double>() << ','
               << e["lambda2"].get<double>() << ',' << e["verdict"].get<std::string>() << ','
               << (e.value("observational", false) ? "true" : "false") << '\n';
        }
        return os.str();
    }
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

inline std::size_t checked_power(std::size_t base, std::size_t exp, const std::string& what) {
    std::size_t d = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        d *= base;
        require(d <= kMaxAmbientDim, what + " exceeds the 4096 ambient dimension cap");
    }
    return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Verifier files: {"k": int, "m": int, "v": [[re, im], ...]} row-major.

inline json verifier_to_json(const VerifierSpec& v) {
    json entries = json::array();
    for (const cplx& z : v.unitary().entries()) entries.push_back(json::array({z.real(), z.imag()}));
    json out;
    out["k"] = v.k();
    out["m"] = v.m();
    out["v"] = std::move(entries);
    return out;
}

inline VerifierSpec verifier_from_json(const json& j) {
    using detail::require;
    require(j.is_object(), "verifier file: top level must be an object");
    require(j.contains("k") && j["k"].is_number_unsigned(), "verifier file: \"k\" must be a non-negative integer");
    require(j.contains("m") && j["m"].is_number_unsigned(), "verifier file: \"m\" must be a non-negative integer");
    const auto k = j["k"].get<std::size_t>();
    const auto m = j["m"].get<std::size_t>();
    require(k >= 1, "verifier file: k must be at least 1");
    require(k + m <= 12, "verifier file: 2^(k+m) exceeds the 4096 ambient dimension cap");
    const std::size_t n = std::size_t{1} << (k + m);
    require(j.contains("v") && j["v"].is_array(), "verifier file: \"v\" must be an array");
    const json& v = j["v"];
    require(v.size() == n * n, "verifier file: \"v\" must hold 2^(2(k+m)) = " + std::to_string(n * n) + " entries");
    Matrix u(n, n);
    for (std::size_t i = 0; i < n * n; ++i) {
        const json& z = v[i];
        require(z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number(),
                "verifier file: entry " + std::to_string(i) + " must be [re, im]");
        u.entries()[i] = cplx{z[0].get<double>(), z[1].get<double>()};
    }
    require(is_unitary(u, kStructuralTol), "verifier file: V is not unitary within 1e-9");
    return VerifierSpec(k, m, std::move(u));
}

inline VerifierSpec load_verifier(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open verifier file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("verifier file is not valid JSON: " + std::string(e.what()));
    }
    return verifier_from_json(j);
}

// ---------------------------------------------------------------------------
// claims

struct ClaimsConfig {
    std::size_t K = 4;
    std::size_t d = 2;
    std::size_t t = 2;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    double tol = kDerivedTol;
    bool corrupt_projector = false;

    bool traces_only() const { return t > K; }

    void validate() const {
        using detail::require;
        require(K >= 1, "--K must be at least 1");
        require(t >= 2 && t <= kMaxPermDegree, "--t must lie in [2, 6]");
        require(trials >= 1, "--trials must be at least 1");
        require(tol > 0.0, "--tol must be positive");
        detail::checked_power(K, t, "K^t");
        if (!traces_only()) {
            require(d >= t && d <= K, "--d must satisfy t <= d <= K (or choose t > K for the trace-only check)");
            require(d <= 4, "--d must be at most 4");
            detail::checked_power(K, d, "K^d");
        }
    }

    json to_json() const {
        return {{"K", K}, {"d", d}, {"t", t}, {"seed", seed}, {"trials", trials}, {"tol", tol},
                {"corrupt_projector", corrupt_projector}};
    }
};

namespace detail {

// (S1 ∩ S2)^⊥ = S1^⊥ + S2^⊥ and (S1 ⊗ S2)^⊥ = (S1^⊥ ⊗ H) ⊕ (S1 ⊗ S2^⊥).
inline void fact_checks(RunReport& rep, std::size_t trial, std::size_t K, Rng& rng, double tol) {
    const std::size_t n = 3 * K;
    const auto s1 = random_subspace(rng, n, 2 * K);
    const auto s2 = random_subspace(rng, n, 2 * K);
    const double r1 = frobenius_distance(projector(orth_complement(intersect(s1, s2))),
                                         projector(span_sum(orth_complement(s1), orth_complement(s2))));
    rep.add(trial, "complement_of_intersection", "complement-of-intersection-is-sum", r1, tol, r1 <= tol);

    const auto a = random_subspace(rng, K, std::max<std::size_t>(1, K / 2));
    const auto b = random_subspace(rng, K, std::max<std::size_t>(1, K - 1));
    const auto ac = orth_complement(a), bc = orth_complement(b);
    std::vector<Vector> prod, first, second;
    for (const auto& x : a.vectors())
        for (const auto& y : b.vectors()) prod.push_back(kron(x, y));
    for (const auto& x : ac.vectors())
        for (std::size_t j = 0; j < K; ++j) first.push_back(kron(x, basis_vector(K, j)));
    for (const auto& x : a.vectors())
        for (const auto& y : bc.vectors()) second.push_back(kron(x, y));
    const std::size_t nn = K * K;
    const double r2 = frobenius_distance(projector(orth_complement(gram_schmidt(prod, nn))),
                                         projector(span_sum(gram_schmidt(first, nn), gram_schmidt(second, nn))));
    rep.add(trial, "complement_of_tensor_product", "complement-of-tensor-product", r2, tol, r2 <= tol);
}

}  // namespace detail

inline RunReport run_claims(const ClaimsConfig& cfg) {
    cfg.validate();
    const detail::Stopwatch clock;
    RunReport rep;
    rep.command = "claims";
    rep.config = cfg.to_json();
    ClaimOptions opt;
    opt.tol = cfg.tol;
    opt.corrupt_antisymmetrizer = cfg.corrupt_projector;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t seed = derive_seed(cfg.seed, trial);
        if (cfg.traces_only()) {
            Matrix a = antisymmetrizer(cfg.t, cfg.K);
            if (cfg.corrupt_projector) {
                a(0, 1) += 0.25;
                a(1, 0) += 0.25;
            }
            const double idem = std::max(frobenius_distance(a * a, a), hermiticity_residual(a));
            rep.add(trial, "antisymmetrizer_projector", "alternating-projector", idem, opt.structural_tol,
                    idem <= opt.structural_tol);
            const double alt = std::abs(trace(a).real() - binomial(cfg.K, cfg.t));
            rep.add(trial, "alt_trace", "alt-dimension-binomial", alt, opt.trace_tol, alt <= opt.trace_tol);
            const double sym = std::abs(trace(symmetrizer(cfg.t, cfg.K)).real() - binomial(cfg.K + cfg.t - 1, cfg.t));
            rep.add(trial, "sym_trace", "sym-dimension-binomial", sym, opt.trace_tol, sym <= opt.trace_tol);
        } else {
            const ClaimReport cr = verify_claims(cfg.d, cfg.t, cfg.K, seed, opt);
            for (const auto& c : cr.checks) rep.add(trial, c.name, c.anchor, c.value, c.threshold, c.pass);
        }
        Rng rng(seed, 7);
        detail::fact_checks(rep, trial, cfg.K, rng, cfg.tol);
    }
    rep.wall_time_s = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceConfig {
    InstanceKind kind = InstanceKind::yes;
    std::size_t k = 2;
    std::size_t m = 1;
    std::size_t d = 1;
    std::size_t q = 3;
    std::size_t r = 8;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    double tol = kDerivedTol;

    PlantParams params() const { return {k, m, d, q, r}; }

    void validate() const {
        using detail::require;
        require(k >= 1 && m >= 1, "--k and --m must be at least 1");
        require(k + m <= 12, "2^(k+m) exceeds the 4096 ambient dimension cap");
        require(q >= 1, "--q must be at least 1");
        require(q <= (std::size_t{1} << k), "--q must satisfy q <= 2^k");
        require(q <= kMaxPermDegree, "--q must be at most 6");
        detail::checked_power(std::size_t{1} << k, q, "(2^k)^q");
        require(r >= 2 && r <= 52, "--r must lie in [2, 52]");
        require(static_cast<double>(q) * std::ldexp(1.0, -static_cast<int>(r)) <= 1.0 / 3.0,
                "--r too small: need q * 2^-r <= 1/3");
        if (kind == InstanceKind::yes) require(d >= 1 && d <= q, "--d must satisfy 1 <= d <= q");
        require(trials >= 1, "--trials must be at least 1");
        require(tol > 0.0, "--tol must be positive");
    }

    json to_json() const {
        return {{"kind", to_string(kind)}, {"k", k}, {"m", m}, {"d", d},     {"q", q},
                {"r", r},                  {"seed", seed}, {"trials", trials}, {"tol", tol}};
    }
};

inline PlantedInstance make_instance(const ReduceConfig& cfg, std::uint64_t seed) {
    return cfg.kind == InstanceKind::yes ? make_yes_instance(cfg.params(), seed) : make_no_instance(cfg.params(), seed);
}

inline RunReport run_reduce(const ReduceConfig& cfg) {
    cfg.validate();
    const detail::Stopwatch clock;
    RunReport rep;
    rep.command = "reduce";
    rep.config = cfg.to_json();
    const bool yes = cfg.kind == InstanceKind::yes;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const PlantedInstance inst = make_instance(cfg, derive_seed(cfg.seed, trial));
        const ReductionResult res = algorithm_A(inst, cfg.q, {true});

        for (const auto& e : res.trace) {
            // Only t = d on yes instances and every t on no instances carry a guarantee.
            const bool observational = yes && e.t != cfg.d;
            rep.trace.push_back({{"trial", trial},
                                 {"t", e.t},
                                 {"lambda1", e.lambda1},
                                 {"lambda2", e.lambda2},
                                 {"verdict", to_string(e.verdict)},
                                 {"observational", observational}});
            if (!observational) {
                const Verdict want = yes ? Verdict::yes : Verdict::no;
                rep.add(trial, "oracle_verdict_t" + std::to_string(e.t),
                        yes ? "unique-witness-at-planted-degree" : "no-instance-rejected-at-every-degree",
                        e.verdict == want ? 1.0 : 0.0, 1.0, e.verdict == want);
            }
        }
        rep.add(trial, "verdict_matches_kind", "reduction-decides-planted-kind", res.accept ? 1.0 : 0.0, yes ? 1.0 : 0.0,
                res.accept == yes);

        if (yes) {
            const Matrix g = combined_operator(inst.spec, cfg.d).g;
            const EighResult dec = eigh(g);
            const PureState w_alt = slater(inst.planted_basis);
            const double on_slater = expectation(g, w_alt.amplitudes()).real();
            const double l2 = dec.values.size() > 1 ? dec.values[1] : 0.0;
            const double overlap = std::pow(std::abs(inner(dec.vectors[0], w_alt.amplitudes())), 2);
            rep.add(trial, "slater_acceptance", "slater-state-accepted", on_slater, 2.0 / 3.0, on_slater >= 2.0 / 3.0);
            rep.add(trial, "second_eigenvalue", "complement-of-slater-rejected", l2, 1.0 / 3.0, l2 <= 1.0 / 3.0);
            rep.add(trial, "top_eigenvector_overlap", "slater-is-top-eigenvector", overlap, 0.999, overlap >= 0.999);
        } else {
            const double top = eigvalsh(acceptance_operator(inst.spec)).front();
            double worst = 0.0;
            for (const auto& e : res.trace) worst = std::max(worst, e.lambda1 - top);
            rep.add(trial, "soundness_monotone", "combined-operator-bounded-by-single-copy", worst, cfg.tol,
                    worst <= cfg.tol);
        }
        if (res.accepted_at) rep.data["accepted_at"].push_back(*res.accepted_at);
        else rep.data["accepted_at"].push_back(nullptr);
    }
    rep.wall_time_s = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumConfig {
    std::optional<std::string> verifier_path;
    ReduceConfig plant;
    std::vector<std::size_t> ts;  // empty: 1..q

    void validate() const {
        if (!verifier_path) plant.validate();
        for (std::size_t t : ts) detail::require(t >= 1 && t <= kMaxPermDegree, "--t values must lie in [1, 6]");
    }

    json to_json() const {
        json out = verifier_path ? json{{"verifier", *verifier_path}} : plant.to_json();
        out["t"] = ts;
        return out;
    }
};

inline RunReport run_spectrum(const SpectrumConfig& cfg) {
    cfg.validate();
    const detail::Stopwatch clock;
    RunReport rep;
    rep.command = "spectrum";
    rep.config = cfg.to_json();

    std::optional<PlantedInstance> inst;
    std::optional<VerifierSpec> spec;
    if (cfg.verifier_path) {
        spec = load_verifier(*cfg.verifier_path);
    } else {
        inst = make_instance(cfg.plant, derive_seed(cfg.plant.seed, 0));
        spec = inst->spec;
    }
    std::vector<std::size_t> ts = cfg.ts;
    if (ts.empty())
        for (std::size_t t = 1; t <= (cfg.verifier_path ? 1 : cfg.plant.q); ++t) ts.push_back(t);
    for (std::size_t t : ts) detail::checked_power(spec->witness_dim(), t, "(2^k)^t");

    const auto pix = eigvalsh(pi_x(*spec));
    const auto e = eigvalsh(acceptance_operator(*spec));
    rep.data["pi_x"] = pix;
    rep.data["acceptance_operator"] = e;
    for (std::size_t t : ts) rep.trace.push_back({{"t", t}, {"combined_operator", eigvalsh(combined_operator(*spec, t).g)}});

    // Compression consistency: the nonzero part of Π_x matches E.
    double gap = 0.0;
    for (std::size_t i = 0; i < pix.size(); ++i) gap = std::max(gap, std::abs(pix[i] - (i < e.size() ? e[i] : 0.0)));
    rep.add(0, "compression_spectrum", "pi-x-compresses-to-acceptance-operator", gap, kDerivedTol, gap <= kDerivedTol);
    if (inst) {
        double dev = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) dev = std::max(dev, std::abs(e[i] - inst->profile.eigenvalues[i]));
        rep.add(0, "planted_profile", "plumbing", dev, kDerivedTol, dev <= kDerivedTol);
    }
    rep.wall_time_s = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// horn

struct HornConfig {
    std::size_t trials = 100;
    std::size_t vector_trials = 10;
    std::size_t min_dim = 4;
    std::size_t max_dim = 64;
    std::uint64_t seed = 1;
    double tol = kDerivedTol;

    void validate() const {
        using detail::require;
        require(trials >= 1, "--trials must be at least 1");
        require(min_dim >= 1 && min_dim <= max_dim && max_dim <= 256, "dimension range must satisfy 1 <= min <= max <= 256");
        require(tol > 0.0, "--tol must be positive");
    }

    json to_json() const {
        return {{"trials", trials}, {"vector_trials", vector_trials}, {"min_dim", min_dim},
                {"max_dim", max_dim}, {"seed", seed},                 {"tol", tol}};
    }
};

struct VectorTrial {
    std::size_t d;
    std::vector<double> mu;           // sorted diagonal in the rotated basis
    std::vector<double> eigenvalues;  // exact spectrum of E
    VectorBoundsResult bounds;
};

/// Verifier whose acceptance operator, read in a slightly rotated eigenbasis,
/// has a diagonal of the vector-definition shape for (d, q, k).
inline VectorTrial vector_definition_trial(std::uint64_t seed, std::size_t k = 2, std::size_t q = 3) {
    Rng rng(seed, 11);
    const std::size_t nw = std::size_t{1} << k;
    const std::size_t d = 1 + static_cast<std::size_t>(rng.next_u64() % q);
    const SubspaceBasis w = random_subspace(rng, nw, d);
    const double head = 1.0 / (3.0 * static_cast<double>(q));
    const double tail = 1.0 / (3.0 * static_cast<double>(nw));
    std::vector<double> acc(d), bg(nw - d);
    for (auto& x : acc) x = 1.0 - 0.25 * head * rng.uniform();
    for (auto& x : bg) x = 0.25 * tail * rng.uniform();
    const VerifierSpec v = plant_verifier(k, 1, w, acc, bg, seed);
    const Matrix e = acceptance_operator(v);
    const EighResult dec = eigh(e);

    // Small rotation exp(i·H) with ‖H‖_F = 0.15.
    Matrix gen = random_hermitian(rng, nw);
    gen = gen * cplx{0.15 / frobenius_norm(gen)};
    const EighResult g = eigh(gen);
    Matrix phase(nw, nw);
    for (std::size_t i = 0; i < nw; ++i) phase(i, i) = std::exp(cplx{0.0, g.values[i]});
    const Matrix rot = g.vectors.as_matrix() * phase * g.vectors.as_matrix().adjoint();
    const Matrix basis = dec.vectors.as_matrix() * rot;
    const Matrix rotated = basis.adjoint() * e * basis;

    std::vector<double> mu(nw);
    for (std::size_t i = 0; i < nw; ++i) mu[i] = rotated(i, i).real();
    std::sort(mu.begin(), mu.end(), std::greater<>{});
    VectorTrial out{d, mu, dec.values, vfqma_bounds(mu, d, q, k)};
    return out;
}

inline RunReport run_horn(const HornConfig& cfg) {
    cfg.validate();
    const detail::Stopwatch clock;
    RunReport rep;
    rep.command = "horn";
    rep.config = cfg.to_json();
    const std::size_t span = cfg.max_dim - cfg.min_dim + 1;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        Rng rng(derive_seed(cfg.seed, trial), 5);
        const std::size_t dim = cfg.min_dim + static_cast<std::size_t>(rng.next_u64() % span);
        const auto res = check_majorization(MajorizationInput::from_hermitian(random_hermitian(rng, dim)), cfg.tol);
        const double min_slack = *std::min_element(res.partial_slacks.begin(), res.partial_slacks.end());
        rep.add(trial, "partial_slacks_dim" + std::to_string(dim), "eigenvalues-majorize-diagonal", min_slack, -cfg.tol,
                min_slack >= -cfg.tol);
        const double total = std::abs(res.partial_slacks.back());
        rep.add(trial, "total_slack_dim" + std::to_string(dim), "eigenvalues-majorize-diagonal", total, cfg.tol,
                total <= cfg.tol);
    }
    for (std::size_t trial = 0; trial < cfg.vector_trials; ++trial) {
        const VectorTrial vt = vector_definition_trial(derive_seed(cfg.seed ^ 0x5eed, trial));
        rep.add(trial, "vector_shape", "vector-definition-shape", vt.bounds.shape_ok ? 1.0 : 0.0, 1.0, vt.bounds.shape_ok);
        const double ld = vt.eigenvalues[vt.d - 1];
        const double ld1 = vt.d < vt.eigenvalues.size() ? vt.eigenvalues[vt.d] : 0.0;
        rep.add(trial, "lambda_d_lower", "vector-definition-eigenvalue-bounds", ld, 2.0 / 3.0 - cfg.tol,
                ld >= 2.0 / 3.0 - cfg.tol && ld >= vt.bounds.lower_lambda_d - cfg.tol);
        rep.add(trial, "lambda_d1_upper", "vector-definition-eigenvalue-bounds", ld1, 1.0 / 3.0 + cfg.tol,
                ld1 <= 1.0 / 3.0 + cfg.tol && ld1 <= vt.bounds.upper_lambda_d1 + cfg.tol);
    }
    rep.wall_time_s = clock.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// gen

/// Planted instance as a verifier file, with the declared profile attached.
inline json generate_instance(const ReduceConfig& cfg) {
    cfg.validate();
    const PlantedInstance inst = make_instance(cfg, derive_seed(cfg.seed, 0));
    json out = verifier_to_json(inst.spec);
    out["kind"] = to_string(inst.kind);
    out["seed"] = cfg.seed;
    out["profile"] = inst.profile.eigenvalues;
    return out;
}

}  // namespace fqma::experiments
