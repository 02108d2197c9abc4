#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srg/params.hpp"

namespace srg {

struct RunConfig {
    ModelConstants constants{ModelConstants::strict_defaults()};

    // grids
    int n_modes{8};
    double delta{1.0};
    int n_max{2};
    int m_max{2};
    int l_max{3};
    int p_max{2};

    // initial family
    std::string preset{"free"}; // free | coupling | file
    double g{1e-3};
    std::string family_file;

    double z_center_re{0.0}, z_center_im{0.0};
    double h_z{1e-3};

    // flow target
    double flow_s{0.0};
    std::vector<double> alphas; // explicit decomposition; empty = canonical
    double beta{-1.0};          // < 0 = canonical remainder

    std::uint64_t seed{12345};

    // tolerances
    double tol_fp{1e-12};
    double tol_norm{1e-10};
    double tol_semigroup{1e-8};

    bool with_oracle{false};
    int ledger_ell_max{30};

    // optional basis-triple overrides for the ledger command (< 0 = use the
    // induction-basis values)
    double eps0_I{-1.0}, eps0_Z{-1.0}, eps0_F{-1.0};

    std::string out_trajectory;
    std::string out_checkpoint;
    std::string out_report;
};

// Throws ConfigError with a field-precise message on any violation.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
void validate_config(const RunConfig& cfg);

} // namespace srg
