// heatops_main.cpp — Command-line front end: load and validate artifacts, run
// syntheses and admissibility decisions, emit JSON/CSV reports.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heatops/analysis.hpp"
#include "heatops/io.hpp"
#include "heatops/synthesis.hpp"

namespace {

using namespace heatops;
using io::json;

constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitInadmissible = 5;
constexpr int kExitTruncation = 6;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        io::atomic_write(out_path, content);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonOpts {
    double beta = 1.0;
    std::uint64_t seed = 1;
    std::string out;
    double tol_delta = 1e-10;  // may only tighten the default
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--beta", opts.beta, "inverse temperature (k_B = 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "RNG seed for sampled quantities");
    cmd->add_option("--out", opts.out, "output path (written atomically)");
    cmd->add_option("--tol-delta", opts.tol_delta,
                    "Δ-target tolerance override (tighten only)")
        ->check(CLI::Range(0.0, 1e-10));
}

void enforce_delta_tolerance(const ChainRealization& chain, double tol_delta) {
    const double residual = std::abs(chain.delta_achieved - chain.target_delta);
    if (residual > tol_delta)
        throw numeric_error("Δ residual " + format_double(residual) +
                            " exceeds the requested tolerance");
}

json synth_report(const ChainRealization& chain) {
    const HermitianOperator q_hat = achieved_hto(chain);
    const double tr_exp = std::exp(-j_function(q_hat.scaled(chain.beta).matrix()));
    json report = io::chain_to_json(chain);
    report["achieved_hto"] = io::hermitian_to_json(q_hat);
    report["channel_distance"] = chain_channel_error(chain);
    report["szilard_margin"] = 1.0 - tr_exp;
    if (chain.kind == ChainKind::complete_erasure) {
        const double j_hat = j_function(q_hat.scaled(chain.beta).matrix());
        report["erasure_margin"] = j_hat + von_neumann_entropy(chain.rho0_probs);
    }
    return report;
}

int run(int argc, char** argv) {
    CLI::App app{"heatops — heat transfer operators of quantum operations"};
    app.require_subcommand(1);

    // hto-compute ------------------------------------------------------------
    auto* hto_cmd = app.add_subcommand("hto-compute", "HTO of a dense realization");
    std::string realization_path;
    CommonOpts hto_opts;
    int lep_samples = 64;
    hto_cmd->add_option("realization", realization_path)->required();
    hto_cmd->add_option("--lep-samples", lep_samples);
    add_common(hto_cmd, hto_opts);
    hto_cmd->callback([&] {
        const DenseRealization r = io::realization_from_json(io::load_json(realization_path));
        const HeatReport report = compute_hto(r);
        json out = io::heat_report_to_json(report);
        out["lep_min_slack"] =
            check_lep(report.channel, report.hto, r.beta(), lep_samples, hto_opts.seed, 8)
                .min_slack;
        emit(io::serialize(out), hto_opts.out);
    });

    // erasure-synth ----------------------------------------------------------
    auto* land_cmd = app.add_subcommand("erasure-synth", "synthesize a Landauer erasure chain");
    std::string q_path, psi0_path;
    CommonOpts land_opts;
    int chain_n = 30;
    double tail_bound = 1e-8, c_scale = 1.0;
    land_cmd->add_option("q", q_path, "target HTO (hermitian matrix JSON)")->required();
    land_cmd->add_option("--psi0", psi0_path, "standard state (pure state JSON)");
    land_cmd->add_option("--N", chain_n, "chain length");
    land_cmd->add_option("--tail-bound", tail_bound)->check(CLI::PositiveNumber);
    land_cmd->add_option("--c", c_scale)->check(CLI::PositiveNumber);
    add_common(land_cmd, land_opts);
    land_cmd->callback([&] {
        const HermitianOperator q =
            io::hermitian_from_json(io::load_json(q_path), Units::energy);
        Vector psi0 = Vector::Zero(q.dim());
        psi0(0) = 1.0;
        if (!psi0_path.empty()) {
            const DensityMatrix pure = io::state_from_json(io::load_json(psi0_path));
            const SpectralDecomposition sd = spectral(pure.matrix());
            psi0 = sd.eigenvectors.col(q.dim() - 1);
        }
        const ChainRealization chain =
            synthesize_landauer(q, land_opts.beta, psi0, chain_n, tail_bound, c_scale);
        enforce_delta_tolerance(chain, land_opts.tol_delta);
        emit(io::serialize(synth_report(chain)), land_opts.out);
    });

    // complete-erasure-synth ---------------------------------------------------
    auto* comp_cmd =
        app.add_subcommand("complete-erasure-synth", "synthesize a complete-erasure chain");
    std::string cq_path, rho0_path;
    CommonOpts comp_opts;
    int chain_m = 20, chain_n2 = 20;
    double tail_bound2 = 1e-8, c_scale2 = 1.0;
    comp_cmd->add_option("q", cq_path)->required();
    comp_cmd->add_option("rho0", rho0_path)->required();
    comp_cmd->add_option("--M", chain_m);
    comp_cmd->add_option("--N", chain_n2);
    comp_cmd->add_option("--tail-bound", tail_bound2)->check(CLI::PositiveNumber);
    comp_cmd->add_option("--c", c_scale2)->check(CLI::PositiveNumber);
    add_common(comp_cmd, comp_opts);
    comp_cmd->callback([&] {
        const HermitianOperator q =
            io::hermitian_from_json(io::load_json(cq_path), Units::energy);
        const DensityMatrix rho0 = io::state_from_json(io::load_json(rho0_path));
        const ChainRealization chain = synthesize_complete_erasure(
            q, comp_opts.beta, rho0, chain_m, chain_n2, tail_bound2, c_scale2);
        enforce_delta_tolerance(chain, comp_opts.tol_delta);
        emit(io::serialize(synth_report(chain)), comp_opts.out);
    });

    // swap-case ----------------------------------------------------------------
    auto* swap_cmd = app.add_subcommand("swap-case", "equality-case swap realization");
    std::string srho0_path, w_path;
    CommonOpts swap_opts;
    swap_cmd->add_option("rho0", srho0_path)->required();
    swap_cmd->add_option("--w", w_path, "device unitary W (matrix JSON)");
    add_common(swap_cmd, swap_opts);
    swap_cmd->callback([&] {
        const DensityMatrix rho0 = io::state_from_json(io::load_json(srho0_path));
        Matrix w = Matrix::Identity(rho0.dim(), rho0.dim());
        if (!w_path.empty()) w = io::matrix_from_json(io::load_json(w_path));
        const DenseRealization r = swap_equality_case(rho0, w, swap_opts.beta);
        const HeatReport report = compute_hto(r);
        json out = io::realization_to_json(r);
        out["report"] = io::heat_report_to_json(report);
        emit(io::serialize(out), swap_opts.out);
    });

    // decide ---------------------------------------------------------------------
    auto* decide_cmd = app.add_subcommand("decide", "admissibility decisions");
    decide_cmd->require_subcommand(1);

    auto* lep_cmd = decide_cmd->add_subcommand("lep", "entropic bound check");
    std::string lep_q, lep_channel;
    CommonOpts lep_opts;
    int samples = 200;
    lep_cmd->add_option("--q", lep_q)->required();
    lep_cmd->add_option("--channel", lep_channel)->required();
    lep_cmd->add_option("--samples", samples);
    add_common(lep_cmd, lep_opts);
    lep_cmd->callback([&] {
        const HermitianOperator q = io::hermitian_from_json(io::load_json(lep_q), Units::energy);
        const KrausChannel channel = io::channel_from_json(io::load_json(lep_channel));
        const LepReport report = check_lep(channel, q, lep_opts.beta, samples, lep_opts.seed);
        json out{{"verdict", report.admissible ? "admissible" : "inadmissible"},
                 {"min_slack", report.min_slack},
                 {"worst_state", io::state_to_json(report.worst_state)}};
        emit(io::serialize(out), lep_opts.out);
    });

    auto* complete_cmd = decide_cmd->add_subcommand("complete", "complete-erasure HTO decision");
    std::string dq_path, drho0_path;
    CommonOpts dec_opts;
    complete_cmd->add_option("--q", dq_path)->required();
    complete_cmd->add_option("--rho0", drho0_path)->required();
    add_common(complete_cmd, dec_opts);
    complete_cmd->callback([&] {
        const HermitianOperator q =
            io::hermitian_from_json(io::load_json(dq_path), Units::energy);
        const DensityMatrix rho0 = io::state_from_json(io::load_json(drho0_path));
        emit(io::serialize(io::verdict_to_json(
                 decide_complete_erasure_hto(q, dec_opts.beta, rho0))),
             dec_opts.out);
    });

    auto* extremal_cmd = decide_cmd->add_subcommand("extremal", "extremal-operation decision");
    std::string eq_path, echannel_path;
    CommonOpts ext_opts;
    extremal_cmd->add_option("--q", eq_path)->required();
    extremal_cmd->add_option("--channel", echannel_path)->required();
    add_common(extremal_cmd, ext_opts);
    extremal_cmd->callback([&] {
        const HermitianOperator q =
            io::hermitian_from_json(io::load_json(eq_path), Units::energy);
        const KrausChannel channel = io::channel_from_json(io::load_json(echannel_path));
        emit(io::serialize(io::verdict_to_json(decide_extremal_hto(q, channel, ext_opts.beta))),
             ext_opts.out);
    });

    // extract-q -------------------------------------------------------------------
    auto* extract_cmd = app.add_subcommand("extract-q", "heat transfer matrix extraction");
    std::string xq_path, xchannel_path;
    CommonOpts xt_opts;
    bool require_fit = false;
    extract_cmd->add_option("--q", xq_path)->required();
    extract_cmd->add_option("--channel", xchannel_path)->required();
    extract_cmd->add_flag("--require-fit", require_fit, "fail when Q lies outside the span");
    add_common(extract_cmd, xt_opts);
    extract_cmd->callback([&] {
        const HermitianOperator q =
            io::hermitian_from_json(io::load_json(xq_path), Units::energy);
        const KrausChannel channel = minimalize(io::channel_from_json(io::load_json(xchannel_path)));
        const HeatTransferMatrix htm = extract_heat_matrix(q, channel, require_fit);
        json out{{"q", io::matrix_to_json(htm.q)},
                 {"residual", htm.residual},
                 {"unique", htm.unique}};
        emit(io::serialize(out), xt_opts.out);
    });

    // widen-q ------------------------------------------------------------------------
    auto* widen_cmd = app.add_subcommand("widen-q", "widen a valid heat transfer matrix");
    std::string wq_path, ws_path;
    CommonOpts widen_opts;
    widen_cmd->add_option("--q", wq_path)->required();
    widen_cmd->add_option("--s", ws_path, "strictly positive hermitian step")->required();
    add_common(widen_cmd, widen_opts);
    widen_cmd->callback([&] {
        const Matrix q = io::matrix_from_json(io::load_json(wq_path));
        const Matrix s = io::matrix_from_json(io::load_json(ws_path));
        const WidenCertificate cert = widen_heat_matrix(q, s, widen_opts.beta);
        json out{{"q_prime", io::matrix_to_json(cert.q_prime)},
                 {"component", io::matrix_to_json(cert.component)},
                 {"t", cert.t},
                 {"component_trace", cert.component_trace},
                 {"certificate", "convex combination {(q+ts, 1/t), (q, (t-1)/t)}"}};
        emit(io::serialize(out), widen_opts.out);
    });

    // study-et -------------------------------------------------------------------------
    auto* study_cmd = app.add_subcommand("study-et", "near-identity family study (CSV)");
    std::string x_path;
    CommonOpts study_opts;
    std::vector<double> t_grid{0.5, 0.1, 0.01};
    study_cmd->add_option("--x", x_path, "operator X (matrix JSON)")->required();
    study_cmd->add_option("--t-grid", t_grid, "family parameters");
    add_common(study_cmd, study_opts);
    study_cmd->callback([&] {
        const Matrix x = io::matrix_from_json(io::load_json(x_path));
        const std::vector<EtRow> rows =
            et_family_study(x, t_grid, study_opts.beta, study_opts.seed);
        std::string csv = "t,B_t,entropic_floor,extremal_floor,admissible_Q_norm,"
                          "paper_trace,status\n";
        for (const EtRow& row : rows) {
            csv += format_double(row.t) + "," + format_double(row.b_t) + "," +
                   format_double(row.entropic_floor) + "," +
                   format_double(row.extremal_floor) + "," +
                   format_double(row.admissible_q_norm) + "," +
                   format_double(row.paper_q_trace) + "," +
                   (row.feasible ? (row.extremal ? "ok" : "dependent") : "infeasible") + "\n";
        }
        emit(csv, study_opts.out);
    });

    // oracle-check -------------------------------------------------------------------------
    auto* oracle_cmd = app.add_subcommand("oracle-check", "dense validation of a chain");
    std::string chain_path;
    CommonOpts oracle_opts;
    int oracle_samples = 20;
    oracle_cmd->add_option("chain", chain_path)->required();
    oracle_cmd->add_option("--samples", oracle_samples);
    add_common(oracle_cmd, oracle_opts);
    oracle_cmd->callback([&] {
        const ChainRealization chain = io::chain_from_json(io::load_json(chain_path));
        const OracleReport report = dense_oracle_check(chain, oracle_samples, oracle_opts.seed);
        json out{{"max_heat_mismatch", report.max_heat_mismatch},
                 {"hto_mismatch", report.hto_mismatch},
                 {"channel_error_dense", report.channel_error_dense},
                 {"channel_error_bound", report.channel_error_bound},
                 {"delta_form_mismatch", report.delta_form_mismatch}};
        emit(io::serialize(out), oracle_opts.out);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const heatops::shape_error& e) {
        std::cerr << "error (input): " << e.what() << "\n";
        return kExitParse;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error (parse): " << e.what() << "\n";
        return kExitParse;
    } catch (const heatops::invariant_error& e) {
        std::cerr << "error (invariant): " << e.what() << "\n";
        return kExitInvariant;
    } catch (const heatops::inadmissible_error& e) {
        std::cerr << "error (inadmissible): " << e.what() << "\n";
        return kExitInadmissible;
    } catch (const heatops::truncation_error& e) {
        std::cerr << "error (truncation): " << e.what() << "\n";
        return kExitTruncation;
    } catch (const heatops::numeric_error& e) {
        std::cerr << "error (numeric): " << e.what() << "\n";
        return kExitNumeric;
    } catch (const heatops::resource_error& e) {
        std::cerr << "error (resource): " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
