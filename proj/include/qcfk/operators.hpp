#pragma once

#include <cstddef>
#include <vector>

#include "qcfk/spaces.hpp"

namespace qcfk {

struct OperatorEntry {
    std::size_t col;
    double value;
};

// Sparse operator with space-tagged domain and range.  Compositions and
// applications are dimension- and tag-checked, which catches most of the
// index bookkeeping mistakes this kind of code invites.
class SpaceTaggedOperator {
public:
    SpaceTaggedOperator(Space range, Space domain)
        : range_(range), domain_(domain), rows_(range.dim) {}

    const Space& range() const { return range_; }
    const Space& domain() const { return domain_; }
    std::size_t row_count() const { return rows_.size(); }

    void add(std::size_t row, std::size_t col, double value);
    const std::vector<OperatorEntry>& row(std::size_t r) const { return rows_[r]; }

    std::vector<double> apply(const std::vector<double>& x) const;
    std::vector<double> apply_transpose(const std::vector<double>& y) const;

    // Column-major copy, used by the Hessian projection in the assembly code.
    std::vector<std::vector<OperatorEntry>> columns() const;

private:
    Space range_, domain_;
    std::vector<std::vector<OperatorEntry>> rows_;
};

SpaceTaggedOperator compose(const SpaceTaggedOperator& a, const SpaceTaggedOperator& b);
SpaceTaggedOperator transpose(const SpaceTaggedOperator& a);
double max_abs_difference(const SpaceTaggedOperator& a, const SpaceTaggedOperator& b);

} // namespace qcfk
