#pragma once

#include <optional>
#include <vector>

#include "qcfk/banded.hpp"

namespace qcfk {

// Harmonic Frenkel-Kontorova chain of 2M atoms indexed i = -M+1 .. M, with
// nearest (k1) and next-nearest (k2) neighbor springs and on-site misfit
// wells of stiffness k0.  The wells skip one lattice site between atoms 0
// and 1, which is the dislocation the goal functional measures.
struct ModelParams {
    double k0 = 0.1;
    double k1 = 2.0;
    double k2 = 1.0;
    double a0 = 1.0;
    int M = 2053;

    // Effective NN stiffness of the continuum (local/Cauchy-Born) model.
    double k12() const { return k1 + 4.0 * k2; }
    void validate() const;
    int atom_count() const { return 2 * M; }
};

// Atom-wise atomistic/continuum split; the atomistic atoms form one
// contiguous block (possibly empty, possibly the whole chain).
class Partition {
public:
    static Partition all_atomistic(int M);
    static Partition all_continuum(int M);
    static Partition with_block(int M, int first, int last);

    int M() const { return M_; }
    bool has_block() const { return block_.has_value(); }
    int block_first() const;
    int block_last() const;
    bool is_atomistic(int atom) const;

private:
    Partition(int M, std::optional<std::pair<int, int>> block);
    int M_;
    std::optional<std::pair<int, int>> block_;
};

// Storage slot of chain atom index i.
inline std::size_t atom_slot(int atom, int M) { return static_cast<std::size_t>(atom + M - 1); }

bool atom_in_range(int atom, int M);

// Center of the misfit well of atom i: (i-1) a0 for i <= 0, i a0 for i >= 1.
// The same formula extends the substrate beyond the chain ends, which is what
// the clamped out-of-range convention pins phantom neighbors to.
double well_position(const ModelParams& p, int atom);

// All well centers, atom storage order; doubles as the reference state for
// the displacement formulation used internally by the adaptive driver.
std::vector<double> reference_field(const ModelParams& p);

double atom_energy_atomistic(const ModelParams& p, const std::vector<double>& y, int atom);
double atom_energy_continuum(const ModelParams& p, const std::vector<double>& y, int atom);
double energy_ac(const ModelParams& p, const Partition& part, const std::vector<double>& y);

// How quadratic terms referencing atoms beyond the chain ends are treated:
// dropped entirely, or kept with the phantom atom clamped at its well.  The
// clamped boundary conditions make the two choices produce bit-identical
// restricted systems; `clamp` exists so tests can assert exactly that.
enum class PhantomPolicy { drop, clamp };

enum class Frame { positions, displacement };

// E(y) = 1/2 y^T H y + b^T y + c assembled by second-differentiating the
// atom-wise energies.  Evaluation is offered in absolute positions and in
// displacements d = y - reference; the displacement path keeps every
// intermediate O(1) at chain lengths where positions reach O(M).
class QuadraticEnergy {
public:
    QuadraticEnergy(const ModelParams& p, const Partition& part, PhantomPolicy policy);

    const ModelParams& params() const { return params_; }
    const BandedMatrix<double>& hessian() const { return hessian_; }
    const std::vector<double>& reference() const { return reference_; }

    double value_at(const std::vector<double>& y) const;
    std::vector<double> gradient_at(const std::vector<double>& y) const;
    std::vector<double> gradient_at_displacement(const std::vector<double>& d) const;
    std::vector<double> gradient(Frame frame, const std::vector<double>& v) const;

private:
    struct Term {
        int p;           // storage slot
        int q;           // storage slot of the partner, or -1 for on-site terms
        double coeff;    // energy contribution is coeff/2 * (y_p - y_q - offset)^2
        double offset;   // position frame
        double offset_d; // displacement frame: offset - (r_p - r_q)
    };

    void add_term(int atom_p, int atom_q, double coeff, double offset, PhantomPolicy policy);
    void add_site_term(int atom, double coeff, double offset);

    ModelParams params_;
    std::vector<Term> terms_;
    BandedMatrix<double> hessian_;
    std::vector<double> reference_;
};

QuadraticEnergy assemble_quadratic(const ModelParams& p, const Partition& part,
                                   PhantomPolicy policy = PhantomPolicy::drop);

} // namespace qcfk
