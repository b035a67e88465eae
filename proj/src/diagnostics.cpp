#include "ctrg/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "ctrg/errors.hpp"

namespace ctrg {

namespace {

struct DerivBlock {
    std::size_t offset, count;
};

DerivBlock deriv_block(const PertTensors& t) {
    const std::size_t off = t.space.offset(FieldRole::DerivSplit);
    const std::size_t cnt = t.space.count(FieldRole::DerivSplit);
    if (cnt == 0) throw InvalidSpace("no splitting-field derivative block");
    if (t.space.size() != t.t2.rows()) throw InvalidSpace("index space does not match tensors");
    for (std::size_t i = off; i < off + cnt; ++i)
        if (t.space.labels[i].role != FieldRole::DerivSplit) throw InvalidSpace("derivative block not contiguous");
    if (t.t4 && t.t4->n0 != t.t4->n && (off != 0 || t.t4->n0 < cnt))
        throw InvalidSpace("row-restricted tensor must lead with the derivative block");
    return {off, cnt};
}

} // namespace

OmegaVectors omega_vectors(const PertTensors& t, std::size_t chi_max) {
    if (chi_max == 0) throw InvalidConfig("chi_max must be positive");
    const DerivBlock b = deriv_block(t);
    const double c = static_cast<double>(chi_max);
    const std::size_t n = t.t2.rows();
    OmegaVectors out;
    out.omega2.assign(b.count, 0.0);
    out.omega4.assign(b.count, 0.0);
    for (std::size_t r = 0; r < b.count; ++r) {
        const std::size_t i = b.offset + r;
        double s2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) s2 += std::abs(t.t2(i, j));
        out.omega2[r] = s2 / c;
        if (t.t4) {
            const std::size_t m = t.t4->n, stride = m * m * m;
            const double* row = t.t4->v.data() + i * stride;
            double s4 = 0.0;
            for (std::size_t k = 0; k < stride; ++k) s4 += std::abs(row[k]);
            out.omega4[r] = s4 / (c * c * c);
        }
    }
    return out;
}

SymMatrix omega_matrix(const PertTensors& t, std::size_t chi_max) {
    if (chi_max == 0) throw InvalidConfig("chi_max must be positive");
    const DerivBlock b = deriv_block(t);
    const double c2 = static_cast<double>(chi_max) * static_cast<double>(chi_max);
    Mat om(b.count, b.count);
    for (std::size_t r = 0; r < b.count; ++r)
        for (std::size_t q = 0; q < b.count; ++q) {
            const std::size_t i = b.offset + r, j = b.offset + q;
            double s = std::abs(t.t2(i, j));
            if (t.t4) {
                const std::size_t m = t.t4->n, stride = m * m;
                const double* row = t.t4->v.data() + (i * m + j) * stride;
                double s4 = 0.0;
                for (std::size_t k = 0; k < stride; ++k) s4 += std::abs(row[k]);
                s += s4 / c2;
            }
            om(r, q) = s;
        }
    return SymMatrix(om, 1e-9);
}

double cdl_distance(const std::vector<double>& spectrum, std::size_t chi) {
    double all = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double b2 = spectrum[i] * spectrum[i];
        all += b2;
        if (i >= chi) tail += b2;
    }
    return all > 0.0 ? std::sqrt(tail / all) : 0.0;
}

double cdl_distance(const FreeWeightState& state) { return cdl_distance(full_split(state).spectrum, state.chi); }

double ir_scale(double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidConfig("ir_scale needs a positive mass");
    return 2.0 * std::log2(1.0 / mass);
}

std::optional<int> detect_cdl_onset(const RGTrace& trace, double floor) {
    std::vector<const LevelRecord*> even;
    for (const auto& r : trace.levels)
        if (r.level % 2 == 0) even.push_back(&r);
    if (even.size() < 2) return std::nullopt;
    // last even level where the distance is still above the floor
    std::size_t last_above = even.size();
    for (std::size_t k = even.size(); k-- > 0;)
        if (even[k]->cdl_distance >= floor) {
            last_above = k;
            break;
        }
    if (last_above + 1 >= even.size()) return std::nullopt; // never reaches the floor, or only at the end
    std::size_t start = last_above + 1;
    while (start > 0 && even[start - 1]->cdl_distance > even[start]->cdl_distance) --start;
    return even[start]->level;
}

std::optional<int> detect_freeze(const RGTrace& trace, double tol) {
    std::vector<const LevelRecord*> even;
    for (const auto& r : trace.levels)
        if (r.level % 2 == 0 && !r.omega4.empty()) even.push_back(&r);
    if (even.size() < 2) return std::nullopt;
    std::vector<double> change(even.size(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 1; k < even.size(); ++k) {
        const auto& a = even[k - 1]->omega4;
        const auto& b = even[k]->omega4;
        if (a.size() != b.size()) continue;
        double diff = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff += std::abs(b[i] - a[i]);
            norm += std::abs(b[i]);
        }
        change[k] = norm > 0.0 ? diff / norm : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    std::size_t k = even.size();
    while (k > 1 && change[k - 1] < tol) --k;
    if (k == even.size()) return std::nullopt;
    return even[k - 1]->level;
}

} // namespace ctrg
