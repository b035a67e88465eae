#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ctrg/errors.hpp"
#include "ctrg/flow.hpp"
#include "ctrg/report.hpp"
#include "ctrg/tensor4.hpp"

using namespace ctrg;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_real(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw InvalidConfig(std::string("bad ") + what + " '" + s + "'");
    return v;
}

// "a:b:logK" gives K log-spaced points from a to b, "a:b:linK" K linear points, otherwise a comma list.
std::vector<double> parse_mass_sweep(const std::string& text) {
    const auto parts = split(text, ':');
    std::vector<double> out;
    if (parts.size() == 1) {
        for (const auto& p : split(text, ',')) out.push_back(parse_real(p, "mass"));
        return out;
    }
    if (parts.size() != 3) throw InvalidConfig("mass sweep must be a:b:logK, a:b:linK or a list");
    const double a = parse_real(parts[0], "mass"), b = parse_real(parts[1], "mass");
    const std::string& mode = parts[2];
    const bool log = mode.rfind("log", 0) == 0, lin = mode.rfind("lin", 0) == 0;
    if (!log && !lin) throw InvalidConfig("mass sweep step must start with log or lin");
    const double k = parse_real(mode.substr(3), "point count");
    if (k < 1 || k != std::floor(k) || k > 10000) throw InvalidConfig("mass sweep point count out of range");
    const int n = static_cast<int>(k);
    if (log && (a <= 0.0 || b <= 0.0)) throw InvalidConfig("log mass sweep needs positive end points");
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
    }
    if (log && n > 1) {
        out.front() = a;
        out.back() = b;
    }
    return out;
}

std::vector<std::size_t> parse_chi_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& p : split(text, ',')) {
        const double v = parse_real(p, "chi");
        if (v < 1 || v != std::floor(v) || v > 4096) throw InvalidConfig("chi values must be integers in [1, 4096]");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void run_single(const RunConfig& c) {
    const FlowResult r = run_flow(c);
    const std::filesystem::path dir(c.output_dir);
    if (c.emit_csv) {
        write_flow_trace_csv((dir / "flow_trace.csv").string(), r.trace);
        if (c.diagnostics) write_omega_trace_csv((dir / "omega_trace.csv").string(), r.trace);
        if (r.trace.omega_matrix_level) write_omega_matrix_csv((dir / "omega_matrix.csv").string(), r.trace);
    }
    if (c.emit_json) write_text((dir / "summary.json").string(), summary_json(c, r));
    std::printf("f0 %s", fmt17(r.report.f0).c_str());
    if (r.report.delta_f0) std::printf(" delta_f0 %s", fmt17(*r.report.delta_f0).c_str());
    if (r.report.f1) std::printf(" f1 %s", fmt17(*r.report.f1).c_str());
    if (r.report.delta_f1) std::printf(" delta_f1 %s", fmt17(*r.report.delta_f1).c_str());
    std::printf("\n");
}

void run_sweep(const RunConfig& base) {
    std::vector<RunConfig> points;
    const std::vector<double> masses = base.sweep_masses.empty() ? std::vector<double>{base.mass} : base.sweep_masses;
    const std::vector<std::size_t> chis =
        base.sweep_chis.empty() ? std::vector<std::size_t>{base.chi_max} : base.sweep_chis;
    for (double m : masses)
        for (std::size_t chi : chis) {
            RunConfig c = base;
            c.mass = m;
            c.chi_max = chi;
            c.diagnostics = false;
            c.omega_matrix_level = -1;
            c.validate();
            points.push_back(c);
        }

    std::vector<FreeEnergyReport> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    const int workers = std::max(1, std::min<int>(kernel_threads(), static_cast<int>(points.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                rows[i] = run_flow(points[i]).report;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    const std::filesystem::path dir(base.output_dir);
    if (base.emit_csv) write_fig_data_csv((dir / "fig2_data.csv").string(), rows);
    for (const auto& r : rows) {
        std::printf("mass %s chi %zu f0 %s", fmt17(r.mass).c_str(), r.chi_max, fmt17(r.f0).c_str());
        if (r.delta_f0) std::printf(" delta_f0 %.3e", *r.delta_f0);
        if (r.delta_f1) std::printf(" delta_f1 %.3e", *r.delta_f1);
        std::printf("\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-field tensor renormalization of the 2D link-field boson"};
    RunConfig c;
    std::string emit = "csv,json", sweep_mass, sweep_chi, backend = "parallel";
    bool no_timing = false;
    app.add_option("--mass", c.mass, "boson mass m0")->capture_default_str();
    app.add_option("--order", c.order, "order in the coupling, 0 or 1")->capture_default_str();
    app.add_option("--chi-max", c.chi_max, "maximal bond dimension")->capture_default_str();
    app.add_option("--sites-exponent", c.sites_exponent, "k with N = 2^(2k) sites")->capture_default_str();
    app.add_option("--zero-tol", c.zero_tol, "relative threshold for vanishing singular values")
        ->capture_default_str();
    app.add_option("--coupling", c.coupling, "coupling used by the order-1 flow")->capture_default_str();
    app.add_option("--emit", emit, "comma list of csv, json")->capture_default_str();
    app.add_option("--output-dir", c.output_dir, "directory for output files")->capture_default_str();
    app.add_option("--sweep-mass", sweep_mass, "a:b:logK, a:b:linK or comma list");
    app.add_option("--sweep-chi", sweep_chi, "comma list of chi_max values");
    app.add_flag("--oracle,!--no-oracle", c.oracle, "compare with the exact free energies");
    app.add_flag("--diagnostics", c.diagnostics, "record omega vectors per level (order 1)");
    app.add_option("--omega-matrix-level", c.omega_matrix_level, "level whose Omega matrix is written");
    app.add_flag("--no-wall-time", no_timing, "write null wall time for byte-identical reruns");
    app.add_option("--backend", backend, "kernel backend, parallel or serial")->capture_default_str();
    app.add_option("--seed", c.seed, "seed for randomized checks")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        c.emit_csv = c.emit_json = false;
        for (const auto& e : split(emit, ',')) {
            if (e == "csv")
                c.emit_csv = true;
            else if (e == "json")
                c.emit_json = true;
            else if (!e.empty())
                throw InvalidConfig("unknown emit format '" + e + "'");
        }
        if (backend == "serial")
            c.backend = Backend::Serial;
        else if (backend != "parallel")
            throw InvalidConfig("backend must be serial or parallel");
        c.timing = !no_timing;
        if (!sweep_mass.empty()) c.sweep_masses = parse_mass_sweep(sweep_mass);
        if (!sweep_chi.empty()) c.sweep_chis = parse_chi_list(sweep_chi);
        if (c.omega_matrix_level >= 0 && !c.diagnostics) throw InvalidConfig("--omega-matrix-level needs --diagnostics");
        c.validate();

        std::error_code ec;
        std::filesystem::create_directories(c.output_dir, ec);
        if (ec || !std::filesystem::is_directory(c.output_dir))
            throw IoError("cannot create output directory " + c.output_dir);

        if (!c.sweep_masses.empty() || !c.sweep_chis.empty())
            run_sweep(c);
        else
            run_single(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.is_validation()) return 2;
        if (e.kind() == "IoError") return 4;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
