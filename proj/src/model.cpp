#include "qcfk/model.hpp"

#include <cmath>
#include <string>

#include "qcfk/checks.hpp"

namespace qcfk {

void ModelParams::validate() const {
    require(k0 > 0.0, "k0 must be positive");
    require(k1 + 2.0 * k2 > 2.0 * std::abs(k2), "stability requires k1 + 2 k2 > 2 |k2|");
    require(a0 > 0.0, "a0 must be positive");
    require(M >= 4, "M must be at least 4");
}

Partition::Partition(int M, std::optional<std::pair<int, int>> block) : M_(M), block_(block) {
    require(M >= 1, "partition needs M >= 1");
    if (block_) {
        require(atom_in_range(block_->first, M) && atom_in_range(block_->second, M),
                "atomistic block exceeds the chain");
        require(block_->first <= block_->second, "atomistic block is reversed");
    }
}

Partition Partition::all_atomistic(int M) { return Partition(M, std::pair{-M + 1, M}); }

Partition Partition::all_continuum(int M) { return Partition(M, std::nullopt); }

Partition Partition::with_block(int M, int first, int last) {
    return Partition(M, std::pair{first, last});
}

int Partition::block_first() const {
    require(block_.has_value(), "partition has no atomistic block");
    return block_->first;
}

int Partition::block_last() const {
    require(block_.has_value(), "partition has no atomistic block");
    return block_->second;
}

bool Partition::is_atomistic(int atom) const {
    return block_ && atom >= block_->first && atom <= block_->second;
}

bool atom_in_range(int atom, int M) { return atom >= -M + 1 && atom <= M; }

double well_position(const ModelParams& p, int atom) {
    return atom <= 0 ? (atom - 1) * p.a0 : atom * p.a0;
}

std::vector<double> reference_field(const ModelParams& p) {
    std::vector<double> r(static_cast<std::size_t>(p.atom_count()));
    for (int i = -p.M + 1; i <= p.M; ++i) r[atom_slot(i, p.M)] = well_position(p, i);
    return r;
}

namespace {

double misfit_energy(const ModelParams& p, const std::vector<double>& y, int atom) {
    const double d = y[atom_slot(atom, p.M)] - well_position(p, atom);
    return 0.5 * p.k0 * d * d;
}

// Quarter of the spring energy between atoms `atom` and `atom - back`; zero
// when the partner falls off the chain.
double bond_quarter(const ModelParams& p, const std::vector<double>& y, double k, int atom,
                    int back) {
    const int other = atom - back;
    if (!atom_in_range(other, p.M) || !atom_in_range(atom, p.M)) return 0.0;
    const double stretch = y[atom_slot(atom, p.M)] - y[atom_slot(other, p.M)] - back * p.a0;
    return 0.25 * k * stretch * stretch;
}

} // namespace

double atom_energy_atomistic(const ModelParams& p, const std::vector<double>& y, int atom) {
    require(atom_in_range(atom, p.M), "atom index outside the chain");
    require(y.size() == static_cast<std::size_t>(p.atom_count()), "state has wrong length");
    double e = misfit_energy(p, y, atom);
    e += bond_quarter(p, y, p.k1, atom, 1);
    e += bond_quarter(p, y, p.k1, atom + 1, 1);
    e += bond_quarter(p, y, p.k2, atom, 2);
    e += bond_quarter(p, y, p.k2, atom + 2, 2);
    return e;
}

double atom_energy_continuum(const ModelParams& p, const std::vector<double>& y, int atom) {
    require(atom_in_range(atom, p.M), "atom index outside the chain");
    require(y.size() == static_cast<std::size_t>(p.atom_count()), "state has wrong length");
    double e = misfit_energy(p, y, atom);
    e += bond_quarter(p, y, p.k12(), atom, 1);
    e += bond_quarter(p, y, p.k12(), atom + 1, 1);
    return e;
}

double energy_ac(const ModelParams& p, const Partition& part, const std::vector<double>& y) {
    require(part.M() == p.M, "partition and parameters disagree on M");
    double e = 0.0;
    for (int i = -p.M + 1; i <= p.M; ++i)
        e += part.is_atomistic(i) ? atom_energy_atomistic(p, y, i)
                                  : atom_energy_continuum(p, y, i);
    return e;
}

QuadraticEnergy::QuadraticEnergy(const ModelParams& p, const Partition& part, PhantomPolicy policy)
    : params_(p),
      hessian_(static_cast<std::size_t>(p.atom_count()), 2),
      reference_(reference_field(p)) {
    p.validate();
    require(part.M() == p.M, "partition and parameters disagree on M");
    for (int i = -p.M + 1; i <= p.M; ++i) {
        add_site_term(i, p.k0, well_position(p, i));
        if (part.is_atomistic(i)) {
            add_term(i, i - 1, 0.5 * p.k1, p.a0, policy);
            add_term(i + 1, i, 0.5 * p.k1, p.a0, policy);
            add_term(i, i - 2, 0.5 * p.k2, 2.0 * p.a0, policy);
            add_term(i + 2, i, 0.5 * p.k2, 2.0 * p.a0, policy);
        } else {
            add_term(i, i - 1, 0.5 * p.k12(), p.a0, policy);
            add_term(i + 1, i, 0.5 * p.k12(), p.a0, policy);
        }
    }
}

void QuadraticEnergy::add_site_term(int atom, double coeff, double offset) {
    const int s = static_cast<int>(atom_slot(atom, params_.M));
    terms_.push_back({s, -1, coeff, offset, offset - reference_[static_cast<std::size_t>(s)]});
    hessian_.add(static_cast<std::size_t>(s), static_cast<std::size_t>(s), coeff);
}

void QuadraticEnergy::add_term(int atom_p, int atom_q, double coeff, double offset,
                               PhantomPolicy policy) {
    const bool p_in = atom_in_range(atom_p, params_.M);
    const bool q_in = atom_in_range(atom_q, params_.M);
    if (p_in && q_in) {
        const int sp = static_cast<int>(atom_slot(atom_p, params_.M));
        const int sq = static_cast<int>(atom_slot(atom_q, params_.M));
        const double ref_gap =
            reference_[static_cast<std::size_t>(sp)] - reference_[static_cast<std::size_t>(sq)];
        terms_.push_back({sp, sq, coeff, offset, offset - ref_gap});
        hessian_.add(static_cast<std::size_t>(sp), static_cast<std::size_t>(sp), coeff);
        hessian_.add(static_cast<std::size_t>(sq), static_cast<std::size_t>(sq), coeff);
        hessian_.add(static_cast<std::size_t>(sp), static_cast<std::size_t>(sq), -coeff);
        return;
    }
    if (policy == PhantomPolicy::drop) return;
    internal_check(p_in || q_in, "spring with both ends off the chain");
    // Pin the phantom end at its well; the term becomes on-site for the real end.
    if (p_in) {
        add_site_term(atom_p, coeff, well_position(params_, atom_q) + offset);
    } else {
        add_site_term(atom_q, coeff, well_position(params_, atom_p) - offset);
    }
}

double QuadraticEnergy::value_at(const std::vector<double>& y) const {
    require(y.size() == reference_.size(), "state has wrong length");
    double e = 0.0;
    for (const Term& t : terms_) {
        const double dp = y[static_cast<std::size_t>(t.p)] - reference_[static_cast<std::size_t>(t.p)];
        const double dq = t.q < 0 ? 0.0
                                  : y[static_cast<std::size_t>(t.q)] -
                                        reference_[static_cast<std::size_t>(t.q)];
        const double s = dp - dq - t.offset_d;
        e += 0.5 * t.coeff * s * s;
    }
    return e;
}

std::vector<double> QuadraticEnergy::gradient_at_displacement(const std::vector<double>& d) const {
    require(d.size() == reference_.size(), "state has wrong length");
    std::vector<double> g(d.size(), 0.0);
    for (const Term& t : terms_) {
        const double dq = t.q < 0 ? 0.0 : d[static_cast<std::size_t>(t.q)];
        const double pull = t.coeff * (d[static_cast<std::size_t>(t.p)] - dq - t.offset_d);
        g[static_cast<std::size_t>(t.p)] += pull;
        if (t.q >= 0) g[static_cast<std::size_t>(t.q)] -= pull;
    }
    return g;
}

std::vector<double> QuadraticEnergy::gradient_at(const std::vector<double>& y) const {
    require(y.size() == reference_.size(), "state has wrong length");
    std::vector<double> g(y.size(), 0.0);
    for (const Term& t : terms_) {
        const double yq = t.q < 0 ? t.offset : y[static_cast<std::size_t>(t.q)] + t.offset;
        const double pull = t.coeff * (y[static_cast<std::size_t>(t.p)] - yq);
        g[static_cast<std::size_t>(t.p)] += pull;
        if (t.q >= 0) g[static_cast<std::size_t>(t.q)] -= pull;
    }
    return g;
}

std::vector<double> QuadraticEnergy::gradient(Frame frame, const std::vector<double>& v) const {
    return frame == Frame::positions ? gradient_at(v) : gradient_at_displacement(v);
}

QuadraticEnergy assemble_quadratic(const ModelParams& p, const Partition& part,
                                   PhantomPolicy policy) {
    return QuadraticEnergy(p, part, policy);
}

} // namespace qcfk
