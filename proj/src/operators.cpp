#include "qcfk/operators.hpp"

#include <algorithm>
#include <cmath>

#include "qcfk/checks.hpp"

namespace qcfk {

std::string describe(const Space& s) {
    const char* name = nullptr;
    switch (s.kind) {
        case SpaceKind::atom: name = "V^a"; break;
        case SpaceKind::atom_interior: name = "V^a_0"; break;
        case SpaceKind::pc: name = "V^p"; break;
        case SpaceKind::pc_interior: name = "V^p_0"; break;
        case SpaceKind::qc: name = "V^q"; break;
        case SpaceKind::qc_interior: name = "V^q_0"; break;
    }
    return std::string(name) + "(" + std::to_string(s.dim) + ")";
}

void SpaceTaggedOperator::add(std::size_t row, std::size_t col, double value) {
    require(row < range_.dim && col < domain_.dim, "operator entry out of range");
    rows_[row].push_back({col, value});
}

std::vector<double> SpaceTaggedOperator::apply(const std::vector<double>& x) const {
    require(x.size() == domain_.dim,
            "operator apply: expected vector in " + describe(domain_));
    std::vector<double> y(range_.dim, 0.0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        double acc = 0.0;
        for (const auto& e : rows_[r]) acc += e.value * x[e.col];
        y[r] = acc;
    }
    return y;
}

std::vector<double> SpaceTaggedOperator::apply_transpose(const std::vector<double>& y) const {
    require(y.size() == range_.dim,
            "operator apply_transpose: expected vector in " + describe(range_));
    std::vector<double> x(domain_.dim, 0.0);
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (const auto& e : rows_[r]) x[e.col] += e.value * y[r];
    return x;
}

std::vector<std::vector<OperatorEntry>> SpaceTaggedOperator::columns() const {
    std::vector<std::vector<OperatorEntry>> cols(domain_.dim);
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (const auto& e : rows_[r]) cols[e.col].push_back({r, e.value});
    return cols;
}

SpaceTaggedOperator compose(const SpaceTaggedOperator& a, const SpaceTaggedOperator& b) {
    require(a.domain() == b.range(),
            "operator compose: inner spaces differ, " + describe(a.domain()) + " vs " +
                describe(b.range()));
    SpaceTaggedOperator c(a.range(), b.domain());
    std::vector<double> scratch(b.domain().dim, 0.0);
    std::vector<std::size_t> touched;
    for (std::size_t r = 0; r < a.row_count(); ++r) {
        for (const auto& ea : a.row(r))
            for (const auto& eb : b.row(ea.col)) {
                if (scratch[eb.col] == 0.0) touched.push_back(eb.col);
                scratch[eb.col] += ea.value * eb.value;
            }
        std::sort(touched.begin(), touched.end());
        for (std::size_t col : touched) {
            if (scratch[col] != 0.0) c.add(r, col, scratch[col]);
            scratch[col] = 0.0;
        }
        touched.clear();
    }
    return c;
}

SpaceTaggedOperator transpose(const SpaceTaggedOperator& a) {
    SpaceTaggedOperator t(a.domain(), a.range());
    for (std::size_t r = 0; r < a.row_count(); ++r)
        for (const auto& e : a.row(r)) t.add(e.col, r, e.value);
    return t;
}

double max_abs_difference(const SpaceTaggedOperator& a, const SpaceTaggedOperator& b) {
    require(a.range() == b.range() && a.domain() == b.domain(),
            "operator difference: space tags differ");
    std::vector<double> scratch(a.domain().dim, 0.0);
    double worst = 0.0;
    for (std::size_t r = 0; r < a.row_count(); ++r) {
        std::vector<std::size_t> touched;
        for (const auto& e : a.row(r)) {
            scratch[e.col] += e.value;
            touched.push_back(e.col);
        }
        for (const auto& e : b.row(r)) {
            scratch[e.col] -= e.value;
            touched.push_back(e.col);
        }
        for (std::size_t col : touched) {
            worst = std::max(worst, std::fabs(scratch[col]));
            scratch[col] = 0.0;
        }
    }
    return worst;
}

} // namespace qcfk
