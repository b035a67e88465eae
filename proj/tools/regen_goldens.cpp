#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ctrg/errors.hpp"
#include "ctrg/oracles.hpp"
#include "ctrg/report.hpp"

using namespace ctrg;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

bool self_check() {
    bool ok = true;
    auto check = [&](const char* what, double got, double want, double tol) {
        const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
        if (!(err <= tol)) {
            std::cerr << "oracle self-check failed: " << what << " error " << err << "\n";
            ok = false;
        }
    };
    for (double m : {0.3, 1.0, 2.0}) {
        check("torus_f0 vs brute force", torus_f0(2, m) * 4.0, -brute_force_logZ(2, m), 1e-12);
        check("torus_f1 vs brute force", torus_f1(2, m) * 4.0, brute_force_df(2, m), 1e-10);
    }
    check("torus_f0 large-size limit", torus_f0(1024, 1.0), exact_f0(1.0), 1e-8);
    check("torus_f1 large-size limit", torus_f1(1024, 1.0), exact_f1(1.0), 1e-8);
    return ok;
}

} // namespace

// Writes the golden f0/f1 table. Usage: regen_goldens <output.csv>
int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: regen_goldens <output.csv>\n";
        return 2;
    }
    try {
        if (!self_check()) return 3;
        std::ostringstream body;
        body << "mass,f0,f1\n";
        for (double m : {0.01, 0.03, 0.1, 0.3, 1.0})
            body << fmt17(m) << ',' << fmt17(exact_f0(m)) << ',' << fmt17(exact_f1(m)) << '\n';
        const std::string data = body.str();
        std::ostringstream out;
        out << "# oracle=exact_f0,exact_f1 tolerance=1e-12 method=gauss_kronrod61\n";
        out << "# generator=" << hex(fnv1a(read_file(GENERATOR_SOURCE))) << '\n';
        out << "# checksum=fnv1a64:" << hex(fnv1a(data)) << '\n';
        out << data;
        write_text(argv[1], out.str());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == "IoError" ? 4 : 3;
    }
    return 0;
}
