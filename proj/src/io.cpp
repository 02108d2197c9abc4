#include "srg/io.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace srg {

using nlohmann::json;

namespace {

json constants_to_json(const ModelConstants& c) {
    return json{{"rho", c.rho},
                {"mu", c.mu},
                {"xi", c.xi},
                {"alpha_minus", c.alpha_minus},
                {"alpha_plus", c.alpha_plus},
                {"strict_mode", c.strict_mode}};
}

ModelConstants constants_from_json(const json& j) {
    ModelConstants c;
    c.rho = j.at("rho").get<double>();
    c.mu = j.at("mu").get<double>();
    c.xi = j.at("xi").get<double>();
    c.alpha_minus = j.at("alpha_minus").get<double>();
    c.alpha_plus = j.at("alpha_plus").get<double>();
    c.strict_mode = j.at("strict_mode").get<bool>();
    return c;
}

} // namespace

void save_checkpoint(const KernelFamily& f, const std::string& path) {
    const Grids& g = *f.grids;
    json j;
    j["format"] = "srg-checkpoint";
    j["schema_version"] = 1;
    j["constants"] = constants_to_json(g.constants);
    j["grid"] = json{{"n_modes", g.modes.size()},
                     {"delta", g.modes.delta},
                     {"z_center", {g.stencil.center.real(), g.stencil.center.imag()}},
                     {"h_z", g.stencil.h}};
    j["m_max"] = f.m_max;
    json ks = json::array();
    for (const auto& [mn, k] : f.kernels) {
        json kv;
        kv["m"] = mn.first;
        kv["n"] = mn.second;
        json vals = json::array();
        for (const auto& v : k.values) vals.push_back(json::array({v.real(), v.imag()}));
        kv["values"] = std::move(vals);
        ks.push_back(std::move(kv));
    }
    j["kernels"] = std::move(ks);

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open checkpoint file for writing: " + path);
    out << j.dump();
}

KernelFamily load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint file: " + path);
    json j;
    in >> j;
    if (j.value("format", "") != "srg-checkpoint")
        throw ConfigError("not a checkpoint file: " + path);
    if (j.value("schema_version", 0) != 1)
        throw ConfigError("unsupported checkpoint schema version");

    ModelConstants c = constants_from_json(j.at("constants"));
    const auto& gj = j.at("grid");
    cplx center(gj.at("z_center")[0].get<double>(), gj.at("z_center")[1].get<double>());
    auto grids = std::make_shared<Grids>(c, gj.at("n_modes").get<int>(),
                                         gj.at("delta").get<double>(), center,
                                         gj.at("h_z").get<double>());
    KernelFamily f;
    f.grids = grids;
    f.m_max = j.at("m_max").get<int>();
    for (const auto& kv : j.at("kernels")) {
        Kernel& k = f.ensure(kv.at("m").get<int>(), kv.at("n").get<int>());
        const auto& vals = kv.at("values");
        if (vals.size() != k.values.size())
            throw ConfigError("checkpoint kernel size does not match its grid");
        for (std::size_t i = 0; i < k.values.size(); ++i)
            k.values[i] = cplx(vals[i][0].get<double>(), vals[i][1].get<double>());
    }
    if (!f.find(0, 0)) throw ConfigError("checkpoint lacks the w00 kernel");
    return f;
}

std::string trajectory_csv_header() {
    return "s,E_re,E_im,norm_I,norm_F,norm_Z,norm_I_4xi,eps_I,eps_F,eps_Z,q,fp_iterations,"
           "norm_W_oracle,eig_est_re,eig_est_im,error_bar,norm_defect";
}

std::string trajectory_csv_row(const TrajectoryRow& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << r.s << ',' << r.E_center.real() << ',' << r.E_center.imag() << ',' << r.norm_I << ','
       << r.norm_F << ',' << r.norm_Z << ',' << r.norm_I_4xi << ',' << (double)r.eps_I << ','
       << (double)r.eps_F << ',' << (double)r.eps_Z << ',' << r.q << ',' << r.fp_iterations
       << ',';
    if (r.norm_W_oracle >= 0.0) os << r.norm_W_oracle;
    os << ',' << r.eig_estimate.real() << ',' << r.eig_estimate.imag() << ',' << r.error_bar
       << ',' << r.normalization_defect;
    return os.str();
}

void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open trajectory file for writing: " + path);
    out << trajectory_csv_header() << '\n';
    for (const auto& r : rows) out << trajectory_csv_row(r) << '\n';
}

} // namespace srg
