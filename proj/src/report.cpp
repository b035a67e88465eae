#include "ctrg/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctrg/errors.hpp"

namespace ctrg {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    f << text;
    if (!f) throw IoError("write failed for " + path);
}

void write_flow_trace_csv(const std::string& path, const RGTrace& trace) {
    std::size_t width = 0;
    for (const auto& r : trace.levels) width = std::max(width, r.singular_values.size());
    std::ostringstream s;
    s << "level,chi_pre,chi_post";
    for (std::size_t i = 1; i <= width; ++i) s << ",b_" << i;
    s << ",cdl_distance,log_const\n";
    for (const auto& r : trace.levels) {
        s << r.level << ',' << r.chi_pre << ',' << r.chi_post;
        for (std::size_t i = 0; i < width; ++i) {
            s << ',';
            if (i < r.singular_values.size()) s << fmt17(r.singular_values[i]);
        }
        s << ',' << fmt17(r.cdl_distance) << ',' << fmt17(r.log_const) << '\n';
    }
    write_text(path, s.str());
}

void write_omega_trace_csv(const std::string& path, const RGTrace& trace) {
    std::ostringstream s;
    s << "level,i,omega2,omega4\n";
    for (const auto& r : trace.levels)
        for (std::size_t i = 0; i < r.omega2.size(); ++i)
            s << r.level << ',' << i + 1 << ',' << fmt17(r.omega2[i]) << ',' << fmt17(r.omega4[i]) << '\n';
    write_text(path, s.str());
}

void write_omega_matrix_csv(const std::string& path, const RGTrace& trace) {
    std::ostringstream s;
    s << "level,i,j,omega\n";
    const Mat& m = trace.omega_matrix;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            s << *trace.omega_matrix_level << ',' << i + 1 << ',' << j + 1 << ',' << fmt17(m(i, j)) << '\n';
    write_text(path, s.str());
}

namespace {

nlohmann::ordered_json num(double x) { return nlohmann::ordered_json(x); }

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

std::string summary_json(const RunConfig& c, const FlowResult& r) {
    nlohmann::ordered_json cfg;
    cfg["mass"] = c.mass;
    cfg["order"] = c.order;
    cfg["chi_max"] = c.chi_max;
    cfg["sites_exponent"] = c.sites_exponent;
    cfg["levels"] = c.levels();
    cfg["zero_tol"] = c.zero_tol;
    cfg["coupling"] = c.coupling;
    cfg["oracle"] = c.oracle;
    cfg["diagnostics"] = c.diagnostics;
    cfg["seed"] = c.seed;

    nlohmann::ordered_json j;
    j["config"] = cfg;
    j["sites"] = num(r.report.sites);
    j["f0"] = num(r.report.f0);
    j["exact_f0"] = opt(r.report.exact_f0);
    j["delta_f0"] = opt(r.report.delta_f0);
    if (c.order == 1) {
        j["f1"] = opt(r.report.f1);
        j["exact_f1"] = opt(r.report.exact_f1);
        j["delta_f1"] = opt(r.report.delta_f1);
    }
    j["cdl_onset_level"] = opt(r.trace.cdl_onset);
    if (c.diagnostics) j["freeze_level"] = opt(r.trace.freeze_level);
    j["wall_time_s"] = c.timing ? nlohmann::ordered_json(r.report.wall_seconds) : nlohmann::ordered_json(nullptr);
    // nlohmann prints doubles with max_digits10 = 17, round-trip exact
    return j.dump(2) + "\n";
}

void write_fig_data_csv(const std::string& path, const std::vector<FreeEnergyReport>& rows) {
    std::ostringstream s;
    s << "mass,chi_max,order,f0,delta_f0,f1,delta_f1\n";
    auto o = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); };
    for (const auto& r : rows)
        s << fmt17(r.mass) << ',' << r.chi_max << ',' << r.order << ',' << fmt17(r.f0) << ',' << o(r.delta_f0) << ','
          << o(r.f1) << ',' << o(r.delta_f1) << '\n';
    write_text(path, s.str());
}

} // namespace ctrg
