// Copyright 2026 The bqt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bqt/rng.hpp"

namespace bqt::qsim {

using Amplitude = std::complex<double>;

/// Tolerance used for amplitude and probability equalities.
inline constexpr double kTol = 1e-12;
/// Eigenvalue floor used when checking density matrices for positivity.
inline constexpr double kPsdTol = 1e-10;
/// Dense registers are capped at this many qubits.
inline constexpr std::size_t kMaxQubits = 12;

/// Raised when a forced measurement outcome has (numerically) zero probability.
struct ImpossibleOutcome : std::domain_error {
    using std::domain_error::domain_error;
};

/// Symbolic qubit name such as "a1" or "B2".
class QubitLabel {
   public:
    explicit QubitLabel(std::string name);

    const std::string &name() const noexcept {
        return name_;
    }

    auto operator<=>(const QubitLabel &) const = default;

   private:
    std::string name_;
};

std::ostream &operator<<(std::ostream &out, const QubitLabel &label);

inline namespace literals {
inline QubitLabel operator""_q(const char *s, std::size_t n) {
    return QubitLabel(std::string(s, n));
}
}  // namespace literals

std::vector<QubitLabel> labels_of(std::initializer_list<std::string_view> names);

enum class Gate1 { I, X, Z, H };
struct Projection;
class Register;
Register tensor(const Register &r1, const Register &r2);
Register apply_gate1(Register reg, const QubitLabel &q, Gate1 gate);
Register apply_cnot(Register reg, const QubitLabel &control, const QubitLabel &target);
Register collapse(Projection projection);
Register permute(const Register &reg, std::span<const QubitLabel> new_order);

/// A normalized dense state vector over named qubits.
///
/// Amplitude index bit k, counted from the most significant end, is the value
/// of labels()[k]. So for labels (x, y) the amplitude order is |00>, |01>,
/// |10>, |11> with x as the left ket digit. A register may have zero qubits, in
/// which case it holds the single scalar amplitude 1.
class Register {
   public:
    /// Validates labels and length, then normalizes. Throws std::invalid_argument
    /// on duplicate labels, wrong length, non-finite entries or a zero vector.
    Register(std::vector<QubitLabel> labels, std::vector<Amplitude> amps);

    static Register scalar();

    const std::vector<QubitLabel> &labels() const noexcept {
        return labels_;
    }
    const std::vector<Amplitude> &amps() const noexcept {
        return amps_;
    }
    std::size_t num_qubits() const noexcept {
        return labels_.size();
    }
    std::size_t dim() const noexcept {
        return amps_.size();
    }

    bool has(const QubitLabel &q) const;
    /// Position of q in labels(). Throws std::invalid_argument if absent.
    std::size_t position(const QubitLabel &q) const;
    /// Index mask of q within the amplitude vector.
    std::size_t mask(const QubitLabel &q) const;

    Amplitude amp(std::string_view bits) const;

    /// Exact amplitude comparison (labels and order must match).
    bool same_amplitudes(const Register &other, double tol = kTol) const;

    double norm_squared() const;

   private:
    friend Register tensor(const Register &, const Register &);
    friend Register apply_gate1(Register, const QubitLabel &, Gate1);
    friend Register apply_cnot(Register, const QubitLabel &, const QubitLabel &);
    friend Register collapse(Projection);
    friend Register permute(const Register &, std::span<const QubitLabel>);

    struct Unchecked {};
    Register(Unchecked, std::vector<QubitLabel> labels, std::vector<Amplitude> amps);

    std::vector<QubitLabel> labels_;
    std::vector<Amplitude> amps_;
};

/// Builds a register from (basis-string, coefficient) pairs and normalizes it.
Register make_register(std::span<const std::pair<std::string, Amplitude>> entries, std::vector<QubitLabel> labels);
Register make_register(
    std::initializer_list<std::pair<std::string, Amplitude>> entries, std::vector<QubitLabel> labels);

/// Kronecker product; labels are r1's followed by r2's.
Register tensor(const Register &r1, const Register &r2);

/// Applies a gate on q. Throws std::invalid_argument for an unknown label.
Register apply_gate1(Register reg, const QubitLabel &q, Gate1 gate);
Register apply_cnot(Register reg, const QubitLabel &control, const QubitLabel &target);

enum class Basis { Z, X };

/// Sample the outcome from the Born distribution. Consumes exactly one draw.
struct Sample {
    std::reference_wrapper<Rng> rng;
};
/// Select the outcome. For X measurements 0 is |+> and 1 is |->.
struct Force {
    int outcome;
};
using MeasureMode = std::variant<Sample, Force>;

struct Measurement {
    int outcome;  // Z: 0/1. X: 0 for +, 1 for -.
    double probability;
    Register collapsed;  // measured qubit removed
};

Measurement measure(const Register &reg, const QubitLabel &q, Basis basis, MeasureMode mode);

/// Born probability of each outcome for measuring q in the given basis.
std::pair<double, double> outcome_probabilities(const Register &reg, const QubitLabel &q, Basis basis);

/// Contraction of the qubits `targets` with the bra <state|. The remainder
/// keeps the other qubits in their original order and is left unnormalized;
/// its squared norm is the Born probability of the projection.
struct Projection {
    double probability;
    std::vector<QubitLabel> labels;
    std::vector<Amplitude> amps;  // unnormalized
};
Projection project_onto(const Register &reg, std::span<const QubitLabel> targets, std::span<const Amplitude> state);

/// Turns a projection into a normalized register. Throws ImpossibleOutcome when
/// its probability is below kTol.
Register collapse(Projection projection);

class DensityMatrix {
   public:
    DensityMatrix(std::vector<QubitLabel> labels, std::vector<Amplitude> entries);

    const std::vector<QubitLabel> &labels() const noexcept {
        return labels_;
    }
    std::size_t dim() const noexcept {
        return std::size_t{1} << labels_.size();
    }
    Amplitude at(std::size_t row, std::size_t col) const {
        return entries_[row * dim() + col];
    }
    const std::vector<Amplitude> &entries() const noexcept {
        return entries_;
    }

    Amplitude trace() const;
    /// Tr(rho^2).
    double purity() const;
    bool is_hermitian(double tol = kTol) const;
    /// Smallest eigenvalue, computed with a self-adjoint eigensolver.
    double min_eigenvalue() const;
    /// Hermitian, unit trace and positive semidefinite (eigenvalue floor kPsdTol).
    bool is_valid() const;

    /// Convex combination sum_k w_k rho_k over identically labelled matrices.
    static DensityMatrix mixture(std::span<const std::pair<double, DensityMatrix>> parts);
    static DensityMatrix pure(const Register &reg);

   private:
    std::vector<QubitLabel> labels_;
    std::vector<Amplitude> entries_;
};

DensityMatrix reduced_density(const Register &reg, std::span<const QubitLabel> keep);
DensityMatrix reduced_density(const Register &reg, std::initializer_list<QubitLabel> keep);

/// <target| rho |target>, after permuting target to rho's label order.
double fidelity_pure(const DensityMatrix &rho, const Register &target);

bool equal_up_to_global_phase(const Register &r1, const Register &r2, double tol = kTol);

/// Same physical state with the qubits reordered. new_order must be a
/// permutation of reg.labels().
Register permute(const Register &reg, std::span<const QubitLabel> new_order);
Register permute(const Register &reg, std::initializer_list<QubitLabel> new_order);

/// |<r1|r2>|^2 with r2 permuted to r1's order.
double overlap_squared(const Register &r1, const Register &r2);

std::string to_string(const Register &reg);

}  // namespace bqt::qsim
