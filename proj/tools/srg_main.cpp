#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "srg/config.hpp"
#include "srg/io.hpp"
#include "srg/presets.hpp"

using namespace srg;
using nlohmann::json;

namespace {

// exit codes: 0 ok, 1 ledger inadmissible, 2 config/domain error,
// 3 gate failure, 4 fixed-point failure, 5 normalization failure,
// 6 tolerance breach in a verification command
template <typename F>
int guarded(F&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const GateError& e) {
        std::cerr << "gate failure: " << e.what() << '\n';
        return 3;
    } catch (const FixedPointError& e) {
        std::cerr << "fixed-point failure: " << e.what() << '\n';
        return 4;
    } catch (const NormalizationError& e) {
        std::cerr << "normalization failure: " << e.what() << '\n';
        return 5;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

std::shared_ptr<const Grids> make_grids(const RunConfig& cfg) {
    return std::make_shared<Grids>(cfg.constants, cfg.n_modes, cfg.delta,
                                   cplx(cfg.z_center_re, cfg.z_center_im), cfg.h_z);
}

KernelFamily make_family(const RunConfig& cfg) {
    if (cfg.preset == "free") return free_family(make_grids(cfg), cfg.m_max);
    if (cfg.preset == "coupling") return coupling_family(make_grids(cfg), cfg.g, cfg.m_max);
    return load_checkpoint(cfg.family_file);
}

FlowOptions make_flow_options(const RunConfig& cfg) {
    FlowOptions opt;
    opt.L_max = cfg.l_max;
    opt.P_max = cfg.p_max;
    opt.tol_fp = cfg.tol_fp;
    opt.tol_norm = cfg.tol_norm;
    opt.with_oracle = cfg.with_oracle;
    opt.oracle_n_max = cfg.n_max;
    return opt;
}

void emit_report(const RunConfig& cfg, const json& j) {
    if (cfg.out_report.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(cfg.out_report);
        if (!out) throw ConfigError("cannot open report file: " + cfg.out_report);
        out << j.dump(2) << '\n';
    }
}

int cmd_ledger(const RunConfig& cfg) {
    const ModelConstants& c = cfg.constants;
    EpsilonTriple eps0 = basis_triple(c);
    if (cfg.eps0_I >= 0.0) eps0.eps_I = cfg.eps0_I;
    if (cfg.eps0_Z >= 0.0) eps0.eps_Z = cfg.eps0_Z;
    if (cfg.eps0_F >= 0.0) eps0.eps_F = cfg.eps0_F;

    StepSequence seq;
    if (!cfg.alphas.empty())
        seq.alphas = cfg.alphas;
    else
        seq.alphas.assign(cfg.ledger_ell_max, c.alpha_minus);
    int ell_max = std::min<int>(cfg.ledger_ell_max, (int)seq.alphas.size());

    json report;
    report["schema_version"] = 1;
    report["command"] = "ledger";
    json rows = json::array();
    bool all_ok = true;
    for (int ell = 0; ell <= ell_max; ++ell) {
        EpsilonTriple e =
            ell == 0 ? eps0 : epsilon_sequence(c, seq, eps0, ell);
        json row;
        row["ell"] = ell;
        row["eps_I"] = (double)e.eps_I;
        row["eps_Z"] = (double)e.eps_Z;
        row["eps_F"] = (double)e.eps_F;
        json betas = json::array();
        for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            double beta = frac * c.alpha_plus;
            auto rep = is_admissible(e, beta, c);
            betas.push_back(json{{"beta", beta},
                                 {"admissible", rep.admissible},
                                 {"besto_ok", rep.besto_ok},
                                 {"hirmn6_ok", rep.hirmn6_ok},
                                 {"g_lt_one_ok", rep.g_lt_one_ok},
                                 {"hiELr22_ok", rep.hiELr22_ok},
                                 {"g_value", (double)rep.g_value}});
            all_ok = all_ok && rep.admissible;
        }
        row["betas"] = std::move(betas);
        rows.push_back(std::move(row));
    }
    report["rows"] = std::move(rows);
    report["all_admissible"] = all_ok;
    emit_report(cfg, report);
    return all_ok ? 0 : 1;
}

int cmd_flow(const RunConfig& cfg) {
    KernelFamily f0 = make_family(cfg);
    FlowOptions opt = make_flow_options(cfg);
    FlowState st;
    if (!cfg.alphas.empty() || cfg.beta >= 0.0) {
        FlowDecomposition dec;
        dec.alphas.alphas = cfg.alphas;
        dec.beta = cfg.beta >= 0.0 ? cfg.beta : 0.0;
        st = flow_with(f0, dec, opt);
    } else {
        st = flow_to(f0, cfg.flow_s, opt);
    }
    if (!cfg.out_trajectory.empty()) write_trajectory_csv(st.trajectory, cfg.out_trajectory);
    if (!cfg.out_checkpoint.empty()) save_checkpoint(st.family, cfg.out_checkpoint);
    if (cfg.out_trajectory.empty() && cfg.out_checkpoint.empty()) {
        std::cout << trajectory_csv_header() << '\n';
        for (const auto& r : st.trajectory) std::cout << trajectory_csv_row(r) << '\n';
    }
    return 0;
}

int cmd_oracle(const RunConfig& cfg) {
    KernelFamily f = make_family(cfg);
    auto basis = std::make_shared<FockBasis>(f.grids, cfg.n_max);
    const ModelConstants& c = cfg.constants;
    cplx zc = f.grids->stencil.center;

    json report;
    report["schema_version"] = 1;
    report["command"] = "oracle";
    bool ok = true;

    // composed-kernel reconstruction against the exact Schur complement
    {
        double alpha = c.alpha_minus;
        FockOperatorMatrix H = build_H(f, zc, *basis);
        FockOperatorMatrix F = schur_feshbach(H, alpha);

        KernelFamily tw = compose_tilde_w(f, alpha, cfg.l_max, cfg.p_max);
        FockOperatorMatrix Ht = build_H(tw, zc, *basis);
        FockOperatorMatrix Hc(*basis);
        FockOperatorMatrix P = chi(alpha, *basis);
        Hc.mat = P.mat * (H.mat + Ht.mat) * P.mat - F.mat;

        // measured Neumann ratio from the matrices themselves
        Eigen::MatrixXcd res = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
        double rho = c.rho, lo = rho * std::exp(-alpha);
        KernelFamily w00only;
        w00only.grids = f.grids;
        w00only.m_max = f.m_max;
        if (const Kernel* w00 = f.find(0, 0)) w00only.ensure(0, 0) = *w00;
        FockOperatorMatrix W00 = build_H(w00only, zc, *basis);
        FockOperatorMatrix W(*basis);
        W.mat = H.mat - W00.mat;
        for (int i = 0; i < basis->dim(); ++i) {
            double e = basis->energies[i];
            if (e > lo * (1.0 + 1e-12) && e <= rho * (1.0 + 1e-12))
                res(i, i) = 1.0 / W00.mat(i, i);
        }
        FockOperatorMatrix Q(*basis);
        Q.mat = W.mat * res;
        double q = operator_norm(Q);
        double Hn = operator_norm(H);
        double residual = operator_norm(Hc);
        double tol = q < 1.0 ? 10.0 * std::pow(q, cfg.l_max + 1) / (1.0 - q) * Hn
                             : std::numeric_limits<double>::infinity();
        ok = ok && residual <= tol;
        report["wick"] = json{{"alpha", alpha},
                              {"neumann_ratio", q},
                              {"residual", residual},
                              {"tolerance", tol},
                              {"ok", residual <= tol}};
    }

    // matrix semigroup on grid-multiple steps
    {
        double a = cfg.delta, b = cfg.delta;
        FockOperatorMatrix H = build_H(f, zc, *basis);
        FockOperatorMatrix R1 = rescaled_map(rescaled_map(H, a), b);
        FockOperatorMatrix R2 = rescaled_map(H, a + b);
        Mask common = mask_and(R1.active, R2.active);
        FockOperatorMatrix D(*basis);
        D.mat = R1.mat - R2.mat;
        double dist = operator_norm(D, common);
        double tol = 1e-10 * operator_norm(H);
        ok = ok && dist <= tol;
        report["semigroup"] = json{{"alpha", a},
                                   {"beta", b},
                                   {"distance", dist},
                                   {"tolerance", tol},
                                   {"ok", dist <= tol}};
    }

    report["ok"] = ok;
    emit_report(cfg, report);
    return ok ? 0 : 6;
}

int cmd_spectrum(const RunConfig& cfg) {
    KernelFamily f0 = make_family(cfg);
    FlowOptions opt = make_flow_options(cfg);
    double s = cfg.flow_s > 0.0 ? cfg.flow_s : 10.0 * cfg.constants.alpha_minus;
    FlowState st = flow_to(f0, s, opt);
    EigenEstimate est = eigenvalue_estimate(st);

    json report;
    report["schema_version"] = 1;
    report["command"] = "spectrum";
    report["s"] = st.s;
    report["estimate"] = json::array({est.value.real(), est.value.imag()});
    report["error_bar"] = est.error_bar;

    bool ok = true;
    FockBasis basis(f0.grids, cfg.n_max);
    if (basis.dim() <= 2000) {
        FockOperatorMatrix H = build_H(f0, cplx(0.0, 0.0), basis);
        Mask chi0 = mask_energy_le(basis, cfg.constants.rho);
        cplx ref = eigen_bottom(H, chi0);
        double err = std::abs(est.value - ref);
        double tol = std::max(est.error_bar, 1e-6);
        ok = err <= tol;
        report["oracle"] = json::array({ref.real(), ref.imag()});
        report["difference"] = err;
        report["tolerance"] = tol;
        report["ok"] = ok;
    }
    emit_report(cfg, report);
    return ok ? 0 : 6;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel renormalization flow engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string mode_override, preset_override;
    double g_override = -1.0, s_override = -1.0;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    std::string out_trajectory, out_checkpoint, out_report;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "run configuration (JSON)")->required();
        cmd->add_option("--mode", mode_override, "override mode: strict|lab");
        cmd->add_option("--preset", preset_override, "override initial preset");
        cmd->add_option("--g", g_override, "override coupling strength");
        cmd->add_option("--s", s_override, "override flow target");
        cmd->add_option("--seed", seed_override, "override seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--trajectory", out_trajectory, "override trajectory CSV path");
        cmd->add_option("--checkpoint", out_checkpoint, "override checkpoint path");
        cmd->add_option("--report", out_report, "override report path");
    };

    CLI::App* ledger = app.add_subcommand("ledger", "admissibility report over a step sequence");
    CLI::App* flow = app.add_subcommand("flow", "run a renormalization flow");
    CLI::App* oracle = app.add_subcommand("oracle", "kernel-vs-matrix verification checks");
    CLI::App* spectrum = app.add_subcommand("spectrum", "flow-based eigenvalue estimate");
    for (auto* cmd : {ledger, flow, oracle, spectrum}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        RunConfig cfg = load_config(config_path);
        // flags take precedence over config fields
        if (!mode_override.empty()) {
            RunConfig base = cfg;
            cfg.constants = mode_override == "lab" ? ModelConstants::lab_defaults()
                                                   : ModelConstants::strict_defaults();
            (void)base;
        }
        if (!preset_override.empty()) cfg.preset = preset_override;
        if (g_override >= 0.0) cfg.g = g_override;
        if (s_override >= 0.0) cfg.flow_s = s_override;
        if (seed_set) cfg.seed = seed_override;
        if (!out_trajectory.empty()) cfg.out_trajectory = out_trajectory;
        if (!out_checkpoint.empty()) cfg.out_checkpoint = out_checkpoint;
        if (!out_report.empty()) cfg.out_report = out_report;
        validate_config(cfg);

        if (*ledger) return cmd_ledger(cfg);
        if (*flow) return cmd_flow(cfg);
        if (*oracle) return cmd_oracle(cfg);
        if (*spectrum) return cmd_spectrum(cfg);
        return 2;
    });
}
