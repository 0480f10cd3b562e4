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

#include "bqt/qsim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace bqt::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_distinct(std::span<const QubitLabel> labels, const char *what) {
    std::set<QubitLabel> seen;
    for (const auto &q : labels) {
        if (!seen.insert(q).second) {
            throw std::invalid_argument(std::string(what) + ": duplicate qubit label '" + q.name() + "'");
        }
    }
}

bool same_label_set(std::span<const QubitLabel> a, std::span<const QubitLabel> b) {
    if (a.size() != b.size()) {
        return false;
    }
    std::set<QubitLabel> sa(a.begin(), a.end());
    return std::all_of(b.begin(), b.end(), [&](const QubitLabel &q) {
        return sa.count(q) == 1;
    });
}

/// For each index over `sub` (a subset of reg's qubits, in the given order),
/// the corresponding bit pattern inside reg's full index.
std::vector<std::size_t> deposit_table(const Register &reg, std::span<const QubitLabel> sub) {
    std::vector<std::size_t> masks;
    masks.reserve(sub.size());
    for (const auto &q : sub) {
        masks.push_back(reg.mask(q));
    }
    std::size_t count = std::size_t{1} << sub.size();
    std::vector<std::size_t> table(count, 0);
    for (std::size_t i = 0; i < count; i++) {
        std::size_t full = 0;
        for (std::size_t k = 0; k < masks.size(); k++) {
            if (i & (std::size_t{1} << (masks.size() - 1 - k))) {
                full |= masks[k];
            }
        }
        table[i] = full;
    }
    return table;
}

std::vector<QubitLabel> complement(const Register &reg, std::span<const QubitLabel> taken) {
    std::set<QubitLabel> t(taken.begin(), taken.end());
    std::vector<QubitLabel> rest;
    for (const auto &q : reg.labels()) {
        if (t.count(q) == 0) {
            rest.push_back(q);
        }
    }
    return rest;
}

std::string format_amplitude(Amplitude a) {
    std::ostringstream out;
    out << std::setprecision(6);
    if (std::abs(a.imag()) < 1e-15) {
        out << a.real();
    } else if (std::abs(a.real()) < 1e-15) {
        out << a.imag() << "i";
    } else {
        out << "(" << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i)";
    }
    return out.str();
}

}  // namespace

QubitLabel::QubitLabel(std::string name) : name_(std::move(name)) {
    if (name_.empty()) {
        throw std::invalid_argument("qubit label must not be empty");
    }
}

std::ostream &operator<<(std::ostream &out, const QubitLabel &label) {
    return out << label.name();
}

std::vector<QubitLabel> labels_of(std::initializer_list<std::string_view> names) {
    std::vector<QubitLabel> result;
    result.reserve(names.size());
    for (auto n : names) {
        result.emplace_back(std::string(n));
    }
    return result;
}

Register::Register(std::vector<QubitLabel> labels, std::vector<Amplitude> amps)
    : labels_(std::move(labels)), amps_(std::move(amps)) {
    require_distinct(labels_, "Register");
    if (labels_.size() > kMaxQubits) {
        throw std::invalid_argument("Register: more than " + std::to_string(kMaxQubits) + " qubits");
    }
    if (amps_.size() != (std::size_t{1} << labels_.size())) {
        throw std::invalid_argument("Register: amplitude count must be 2^n");
    }
    double norm = 0;
    for (const auto &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("Register: non-finite amplitude");
        }
        norm += std::norm(a);
    }
    if (!(norm > 0)) {
        throw std::invalid_argument("Register: zero vector");
    }
    double scale = 1.0 / std::sqrt(norm);
    for (auto &a : amps_) {
        a *= scale;
    }
}

Register::Register(Unchecked, std::vector<QubitLabel> labels, std::vector<Amplitude> amps)
    : labels_(std::move(labels)), amps_(std::move(amps)) {
}

Register Register::scalar() {
    return Register(Unchecked{}, {}, {Amplitude{1, 0}});
}

bool Register::has(const QubitLabel &q) const {
    return std::find(labels_.begin(), labels_.end(), q) != labels_.end();
}

std::size_t Register::position(const QubitLabel &q) const {
    auto it = std::find(labels_.begin(), labels_.end(), q);
    if (it == labels_.end()) {
        throw std::invalid_argument("unknown qubit label '" + q.name() + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Register::mask(const QubitLabel &q) const {
    return std::size_t{1} << (labels_.size() - 1 - position(q));
}

Amplitude Register::amp(std::string_view bits) const {
    if (bits.size() != labels_.size()) {
        throw std::invalid_argument("basis string length does not match register size");
    }
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("basis string must contain only 0 and 1");
        }
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return amps_[index];
}

bool Register::same_amplitudes(const Register &other, double tol) const {
    if (labels_ != other.labels_) {
        return false;
    }
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (std::abs(amps_[i] - other.amps_[i]) > tol) {
            return false;
        }
    }
    return true;
}

double Register::norm_squared() const {
    double total = 0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

Register make_register(std::span<const std::pair<std::string, Amplitude>> entries, std::vector<QubitLabel> labels) {
    if (labels.size() > kMaxQubits) {
        throw std::invalid_argument("make_register: more than " + std::to_string(kMaxQubits) + " qubits");
    }
    std::vector<Amplitude> amps(std::size_t{1} << labels.size());
    for (const auto &[bits, coeff] : entries) {
        if (bits.size() != labels.size()) {
            throw std::invalid_argument("make_register: basis string '" + bits + "' has wrong length");
        }
        std::size_t index = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("make_register: basis string must contain only 0 and 1");
            }
            index = (index << 1) | static_cast<std::size_t>(c == '1');
        }
        amps[index] += coeff;
    }
    return Register(std::move(labels), std::move(amps));
}

Register make_register(
    std::initializer_list<std::pair<std::string, Amplitude>> entries, std::vector<QubitLabel> labels) {
    return make_register(std::span<const std::pair<std::string, Amplitude>>(entries.begin(), entries.size()),
                         std::move(labels));
}

Register tensor(const Register &r1, const Register &r2) {
    std::vector<QubitLabel> labels = r1.labels_;
    labels.insert(labels.end(), r2.labels_.begin(), r2.labels_.end());
    require_distinct(labels, "tensor");
    if (labels.size() > kMaxQubits) {
        throw std::invalid_argument("tensor: result exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    std::vector<Amplitude> amps;
    amps.reserve(r1.dim() * r2.dim());
    for (const auto &a : r1.amps_) {
        for (const auto &b : r2.amps_) {
            amps.push_back(a * b);
        }
    }
    return Register(Register::Unchecked{}, std::move(labels), std::move(amps));
}

Register apply_gate1(Register reg, const QubitLabel &q, Gate1 gate) {
    std::size_t m = reg.mask(q);
    auto &amps = reg.amps_;
    switch (gate) {
        case Gate1::I:
            break;
        case Gate1::X:
            for (std::size_t i = 0; i < amps.size(); i++) {
                if (!(i & m)) {
                    std::swap(amps[i], amps[i | m]);
                }
            }
            break;
        case Gate1::Z:
            for (std::size_t i = 0; i < amps.size(); i++) {
                if (i & m) {
                    amps[i] = -amps[i];
                }
            }
            break;
        case Gate1::H:
            for (std::size_t i = 0; i < amps.size(); i++) {
                if (!(i & m)) {
                    Amplitude a0 = amps[i];
                    Amplitude a1 = amps[i | m];
                    amps[i] = (a0 + a1) * kInvSqrt2;
                    amps[i | m] = (a0 - a1) * kInvSqrt2;
                }
            }
            break;
    }
    return reg;
}

Register apply_cnot(Register reg, const QubitLabel &control, const QubitLabel &target) {
    if (control == target) {
        throw std::invalid_argument("apply_cnot: control and target must differ");
    }
    std::size_t c = reg.mask(control);
    std::size_t t = reg.mask(target);
    auto &amps = reg.amps_;
    for (std::size_t i = 0; i < amps.size(); i++) {
        if ((i & c) && !(i & t)) {
            std::swap(amps[i], amps[i | t]);
        }
    }
    return reg;
}

Projection project_onto(const Register &reg, std::span<const QubitLabel> targets, std::span<const Amplitude> state) {
    require_distinct(targets, "project_onto");
    if (state.size() != (std::size_t{1} << targets.size())) {
        throw std::invalid_argument("project_onto: projector state has wrong dimension");
    }
    auto rest = complement(reg, targets);
    auto target_bits = deposit_table(reg, targets);  // validates labels
    auto rest_bits = deposit_table(reg, rest);

    Projection result{0.0, std::move(rest), std::vector<Amplitude>(rest_bits.size())};
    for (std::size_t r = 0; r < rest_bits.size(); r++) {
        Amplitude acc{0, 0};
        for (std::size_t b = 0; b < target_bits.size(); b++) {
            acc += std::conj(state[b]) * reg.amps()[rest_bits[r] | target_bits[b]];
        }
        result.amps[r] = acc;
        result.probability += std::norm(acc);
    }
    return result;
}

Register collapse(Projection projection) {
    if (projection.probability < kTol) {
        throw ImpossibleOutcome("outcome has zero probability");
    }
    double scale = 1.0 / std::sqrt(projection.probability);
    for (auto &a : projection.amps) {
        a *= scale;
    }
    return Register(Register::Unchecked{}, std::move(projection.labels), std::move(projection.amps));
}

namespace {

std::array<Amplitude, 2> basis_vector(Basis basis, int outcome) {
    if (basis == Basis::Z) {
        return outcome == 0 ? std::array<Amplitude, 2>{1.0, 0.0} : std::array<Amplitude, 2>{0.0, 1.0};
    }
    return outcome == 0 ? std::array<Amplitude, 2>{kInvSqrt2, kInvSqrt2}
                        : std::array<Amplitude, 2>{kInvSqrt2, -kInvSqrt2};
}

}  // namespace

std::pair<double, double> outcome_probabilities(const Register &reg, const QubitLabel &q, Basis basis) {
    std::size_t m = reg.mask(q);
    double p0 = 0;
    double p1 = 0;
    const auto &amps = reg.amps();
    for (std::size_t i = 0; i < amps.size(); i++) {
        if (i & m) {
            continue;
        }
        Amplitude a0 = amps[i];
        Amplitude a1 = amps[i | m];
        if (basis == Basis::Z) {
            p0 += std::norm(a0);
            p1 += std::norm(a1);
        } else {
            p0 += std::norm((a0 + a1) * kInvSqrt2);
            p1 += std::norm((a0 - a1) * kInvSqrt2);
        }
    }
    return {p0, p1};
}

Measurement measure(const Register &reg, const QubitLabel &q, Basis basis, MeasureMode mode) {
    reg.position(q);
    int outcome = 0;
    if (auto *forced = std::get_if<Force>(&mode)) {
        if (forced->outcome != 0 && forced->outcome != 1) {
            throw std::invalid_argument("measure: forced outcome must be 0 or 1");
        }
        outcome = forced->outcome;
    } else {
        auto [p0, p1] = outcome_probabilities(reg, q, basis);
        double u = std::get<Sample>(mode).rng.get().uniform();
        outcome = u * (p0 + p1) < p0 ? 0 : 1;
    }
    auto vec = basis_vector(basis, outcome);
    std::array<QubitLabel, 1> target{q};
    auto projection = project_onto(reg, target, vec);
    double probability = projection.probability;
    return Measurement{outcome, probability, collapse(std::move(projection))};
}

DensityMatrix::DensityMatrix(std::vector<QubitLabel> labels, std::vector<Amplitude> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
    require_distinct(labels_, "DensityMatrix");
    if (labels_.size() > kMaxQubits) {
        throw std::invalid_argument("DensityMatrix: too many qubits");
    }
    if (entries_.size() != dim() * dim()) {
        throw std::invalid_argument("DensityMatrix: entry count must be 4^m");
    }
}

Amplitude DensityMatrix::trace() const {
    Amplitude t{0, 0};
    for (std::size_t i = 0; i < dim(); i++) {
        t += at(i, i);
    }
    return t;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
    double p = 0;
    for (std::size_t i = 0; i < dim(); i++) {
        for (std::size_t j = 0; j < dim(); j++) {
            p += (at(i, j) * at(j, i)).real();
        }
    }
    return p;
}

bool DensityMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim(); i++) {
        for (std::size_t j = i; j < dim(); j++) {
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd m(dim(), dim());
    for (std::size_t i = 0; i < dim(); i++) {
        for (std::size_t j = 0; j < dim(); j++) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = at(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid() const {
    return is_hermitian() && std::abs(trace() - Amplitude{1, 0}) <= kTol && min_eigenvalue() >= -kPsdTol;
}

DensityMatrix DensityMatrix::mixture(std::span<const std::pair<double, DensityMatrix>> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("DensityMatrix::mixture: no components");
    }
    const auto &labels = parts.front().second.labels();
    std::vector<Amplitude> entries(parts.front().second.entries().size());
    for (const auto &[weight, rho] : parts) {
        if (rho.labels() != labels) {
            throw std::invalid_argument("DensityMatrix::mixture: label mismatch");
        }
        for (std::size_t k = 0; k < entries.size(); k++) {
            entries[k] += weight * rho.entries()[k];
        }
    }
    return DensityMatrix(labels, std::move(entries));
}

DensityMatrix DensityMatrix::pure(const Register &reg) {
    std::size_t d = reg.dim();
    std::vector<Amplitude> entries(d * d);
    for (std::size_t i = 0; i < d; i++) {
        for (std::size_t j = 0; j < d; j++) {
            entries[i * d + j] = reg.amps()[i] * std::conj(reg.amps()[j]);
        }
    }
    return DensityMatrix(reg.labels(), std::move(entries));
}

DensityMatrix reduced_density(const Register &reg, std::span<const QubitLabel> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("reduced_density: keep set must be nonempty");
    }
    require_distinct(keep, "reduced_density");
    auto keep_bits = deposit_table(reg, keep);
    auto rest = complement(reg, keep);
    auto env_bits = deposit_table(reg, rest);
    std::size_t d = keep_bits.size();
    std::vector<Amplitude> entries(d * d);
    const auto &amps = reg.amps();
    for (std::size_t i = 0; i < d; i++) {
        for (std::size_t j = 0; j < d; j++) {
            Amplitude acc{0, 0};
            for (std::size_t e : env_bits) {
                acc += amps[keep_bits[i] | e] * std::conj(amps[keep_bits[j] | e]);
            }
            entries[i * d + j] = acc;
        }
    }
    return DensityMatrix(std::vector<QubitLabel>(keep.begin(), keep.end()), std::move(entries));
}

DensityMatrix reduced_density(const Register &reg, std::initializer_list<QubitLabel> keep) {
    return reduced_density(reg, std::span<const QubitLabel>(keep.begin(), keep.size()));
}

double fidelity_pure(const DensityMatrix &rho, const Register &target) {
    if (!same_label_set(rho.labels(), target.labels())) {
        throw std::invalid_argument("fidelity_pure: label sets differ");
    }
    Register t = permute(target, rho.labels());
    Amplitude acc{0, 0};
    for (std::size_t i = 0; i < rho.dim(); i++) {
        for (std::size_t j = 0; j < rho.dim(); j++) {
            acc += std::conj(t.amps()[i]) * rho.at(i, j) * t.amps()[j];
        }
    }
    return acc.real();
}

bool equal_up_to_global_phase(const Register &r1, const Register &r2, double tol) {
    if (!same_label_set(r1.labels(), r2.labels())) {
        throw std::invalid_argument("equal_up_to_global_phase: label sets differ");
    }
    Register aligned = permute(r2, r1.labels());
    const auto &a = r1.amps();
    const auto &b = aligned.amps();
    std::size_t k = 0;
    for (std::size_t i = 1; i < a.size(); i++) {
        if (std::abs(a[i]) > std::abs(a[k])) {
            k = i;
        }
    }
    if (std::abs(b[k]) < kTol) {
        return false;
    }
    Amplitude phase = a[k] / b[k];
    phase /= std::abs(phase);
    double dist = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        dist += std::norm(a[i] - phase * b[i]);
    }
    return std::sqrt(dist) <= tol;
}

Register permute(const Register &reg, std::span<const QubitLabel> new_order) {
    if (!same_label_set(reg.labels(), new_order)) {
        throw std::invalid_argument("permute: new order is not a permutation of the register labels");
    }
    require_distinct(new_order, "permute");
    auto bits = deposit_table(reg, new_order);
    std::vector<Amplitude> amps(reg.dim());
    for (std::size_t i = 0; i < amps.size(); i++) {
        amps[i] = reg.amps_[bits[i]];
    }
    return Register(Register::Unchecked{}, std::vector<QubitLabel>(new_order.begin(), new_order.end()),
                    std::move(amps));
}

Register permute(const Register &reg, std::initializer_list<QubitLabel> new_order) {
    return permute(reg, std::span<const QubitLabel>(new_order.begin(), new_order.size()));
}

double overlap_squared(const Register &r1, const Register &r2) {
    Register aligned = permute(r2, r1.labels());
    Amplitude acc{0, 0};
    for (std::size_t i = 0; i < r1.dim(); i++) {
        acc += std::conj(r1.amps()[i]) * aligned.amps()[i];
    }
    return std::norm(acc);
}

std::string to_string(const Register &reg) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < reg.dim(); i++) {
        Amplitude a = reg.amps()[i];
        if (std::abs(a) < 1e-12) {
            continue;
        }
        if (!first) {
            out << " + ";
        }
        first = false;
        out << format_amplitude(a) << "|";
        for (std::size_t k = 0; k < reg.num_qubits(); k++) {
            out << ((i >> (reg.num_qubits() - 1 - k)) & 1);
        }
        out << ">";
    }
    if (first) {
        out << "0";
    }
    out << "_{";
    for (std::size_t k = 0; k < reg.num_qubits(); k++) {
        out << (k ? "," : "") << reg.labels()[k];
    }
    out << "}";
    return out.str();
}

}  // namespace bqt::qsim
