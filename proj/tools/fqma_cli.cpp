// Command-line driver for the few-witness → unique-witness reduction simulator.
//
// Exit status: 0 all checks pass, 1 a check failed or a guaranteed promise
// was violated, 2 configuration error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fqma/experiments.hpp"

namespace ex = fqma::experiments;

namespace {

struct Output {
    std::string path;
    std::string format = "json";
};

void emit(const std::string& text, const Output& out) {
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path);
    if (!f) throw ex::ConfigError("cannot write output file: " + out.path);
    f << text;
}

int finish(const ex::RunReport& rep, const Output& out) {
    emit(out.format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n", out);
    std::size_t failed = 0;
    for (const auto& c : rep.checks)
        if (!c.pass) {
            ++failed;
            std::cerr << "FAIL trial " << c.trial << ' ' << c.name << " [" << c.anchor << "] value=" << c.value
                      << " threshold=" << c.threshold << '\n';
        }
    std::cerr << rep.command << ": " << rep.checks.size() - failed << '/' << rep.checks.size() << " checks passed\n";
    return rep.exit_code();
}

fqma::InstanceKind parse_kind(const std::string& s) {
    if (s == "yes") return fqma::InstanceKind::yes;
    if (s == "no") return fqma::InstanceKind::no;
    throw ex::ConfigError("--kind must be yes or no");
}

void add_output(CLI::App* cmd, Output& out) {
    cmd->add_option("--out", out.path, "Write the report to this file instead of stdout");
    cmd->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

void add_plant_options(CLI::App* cmd, ex::ReduceConfig& cfg, std::string& kind) {
    cmd->add_option("--kind", kind, "Planted instance kind (yes|no)")->check(CLI::IsMember({"yes", "no"}));
    cmd->add_option("--k", cfg.k, "Witness qubits");
    cmd->add_option("--m", cfg.m, "Auxiliary qubits");
    cmd->add_option("--d", cfg.d, "Dimension of the planted witness subspace");
    cmd->add_option("--q", cfg.q, "Bound on the witness-subspace dimension");
    cmd->add_option("--r", cfg.r, "Amplification exponent (errors 2^-r)");
    cmd->add_option("--seed", cfg.seed, "Master seed");
    cmd->add_option("--tol", cfg.tol, "Derived-check tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for the reduction from few-witness to unique-witness quantum verification"};
    app.require_subcommand(1);
    Output out;

    ex::ClaimsConfig claims;
    auto* c_claims = app.add_subcommand("claims", "Certify the alternating-subspace identities on random subspaces");
    c_claims->add_option("--K", claims.K, "Local dimension");
    c_claims->add_option("--d", claims.d, "Dimension of the random subspace W");
    c_claims->add_option("--t", claims.t, "Number of tensor copies");
    c_claims->add_option("--seed", claims.seed, "Master seed");
    c_claims->add_option("--trials", claims.trials, "Number of random subspaces");
    c_claims->add_option("--tol", claims.tol, "Derived-check tolerance");
    c_claims->add_flag("--corrupt-projector", claims.corrupt_projector, "Negative control: perturb the antisymmetrizer");
    add_output(c_claims, out);

    ex::ReduceConfig reduce;
    std::string reduce_kind = "yes";
    auto* c_reduce = app.add_subcommand("reduce", "Run the reduction loop on planted instances");
    add_plant_options(c_reduce, reduce, reduce_kind);
    c_reduce->add_option("--trials", reduce.trials, "Number of planted instances");
    add_output(c_reduce, out);

    ex::SpectrumConfig spectrum;
    std::string spectrum_kind = "yes";
    std::string verifier_path;
    auto* c_spectrum = app.add_subcommand("spectrum", "Eigenvalues of the projector, acceptance operator and combined operators");
    add_plant_options(c_spectrum, spectrum.plant, spectrum_kind);
    c_spectrum->add_option("--verifier", verifier_path, "Verifier file (JSON) instead of a planted instance");
    c_spectrum->add_option("--t", spectrum.ts, "Tensor degrees for the combined operator (default 1..q)");
    add_output(c_spectrum, out);

    ex::HornConfig horn;
    auto* c_horn = app.add_subcommand("horn", "Majorization checks on random Hermitian matrices and vector-shaped verifiers");
    c_horn->add_option("--trials", horn.trials, "Number of random Hermitian matrices");
    c_horn->add_option("--seed", horn.seed, "Master seed");
    c_horn->add_option("--tol", horn.tol, "Slack tolerance");
    add_output(c_horn, out);

    ex::ReduceConfig gen;
    std::string gen_kind = "yes";
    auto* c_gen = app.add_subcommand("gen", "Write a planted instance as a verifier file");
    add_plant_options(c_gen, gen, gen_kind);
    c_gen->add_option("--out", out.path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_claims) return finish(ex::run_claims(claims), out);
        if (*c_reduce) {
            reduce.kind = parse_kind(reduce_kind);
            return finish(ex::run_reduce(reduce), out);
        }
        if (*c_spectrum) {
            spectrum.plant.kind = parse_kind(spectrum_kind);
            if (!verifier_path.empty()) spectrum.verifier_path = verifier_path;
            return finish(ex::run_spectrum(spectrum), out);
        }
        if (*c_horn) return finish(ex::run_horn(horn), out);
        if (*c_gen) {
            gen.kind = parse_kind(gen_kind);
            emit(ex::generate_instance(gen).dump(2) + "\n", out);
            return 0;
        }
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::overflow_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
