#pragma once

// Second-quantized operator polynomials: a small text DSL, discovery of the
// linear photon-number invariants an interaction conserves, and assembly on a
// truncated product Fock space.
//
// Grammar (whitespace is insignificant):
//
//   expression  := group ('+' group)*
//   group       := signed_term ('-' signed_term)* ['+' 'hc']
//   signed_term := ['-'] [decimal ['*']] factor+
//   factor      := letter [''']
//
// A trailing apostrophe marks a creation operator; powers are written as
// repeated factors. `hc` adds the Hermitian conjugate of every term in its
// group. Within one mode, creation factors must precede annihilation
// factors. Only real coefficients are accepted.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace triwave {

struct Factor {
  int mode = 0;
  bool dagger = false;
  int power = 1;

  bool operator==(const Factor&) const = default;
};

struct Monomial {
  double coefficient = 0.0;
  std::vector<Factor> factors;  // sorted by (mode, dagger first)
};

struct OperatorExpr {
  std::vector<char> modes;
  std::vector<Monomial> monomials;  // canonical order, unique factor lists

  std::size_t mode_count() const { return modes.size(); }
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NotHermitianError : public std::invalid_argument {
 public:
  explicit NotHermitianError(const std::string& monomial)
      : std::invalid_argument("expression is not Hermitian: no conjugate for " + monomial),
        monomial_(monomial) {}
  const std::string& monomial() const { return monomial_; }

 private:
  std::string monomial_;
};

/// Parses and canonicalizes `text`. Modes default to the letters used, in
/// alphabetical order; an explicit list may add modes that do not appear.
OperatorExpr parse_operator(std::string_view text,
                            const std::optional<std::vector<char>>& modes = std::nullopt);

/// Canonical text that parses back to the same expression (given the same
/// mode list).
std::string to_string(const OperatorExpr& expr);
std::string to_string(const Monomial& m, const std::vector<char>& modes);

/// Hermitian conjugate: per mode, creation and annihilation powers swap.
Monomial conjugate(const Monomial& m);

/// Net photon change per mode (creation minus annihilation powers).
std::vector<std::vector<std::int64_t>> net_changes(const OperatorExpr& expr);

/// Integer basis of {lambda : lambda . delta = 0 for every monomial}. One
/// vector per free column of the reduced row echelon form of the net-change
/// matrix, scaled to primitive integers with a positive leading entry.
std::vector<std::vector<std::int64_t>> derive_invariants(const OperatorExpr& expr);

/// Rank of an integer matrix over the rationals.
std::size_t rational_rank(const std::vector<std::vector<std::int64_t>>& rows);

/// For each off-diagonal monomial, sum_i w_i delta_i where w_i is the
/// coefficient of the number operator of mode i. Zero means resonant.
std::vector<double> resonance_defects(const OperatorExpr& expr);

inline constexpr std::size_t kDefaultMaxDimension = 200000;

class DimensionLimitError : public std::length_error {
 public:
  DimensionLimitError(std::size_t requested, std::size_t limit)
      : std::length_error("Fock space dimension exceeds the limit of " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}
  std::size_t requested() const { return requested_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

struct SparseEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Real symmetric matrix over the product basis |n_0, n_1, ...> with n_i in
/// [0, cutoff_i]; the last mode varies fastest. States whose transitions
/// leave the cutoff box are flagged as boundary states and the transitions
/// dropped.
class SparseOperator {
 public:
  SparseOperator(std::vector<int> cutoffs, std::vector<SparseEntry> entries,
                 std::vector<bool> boundary);

  std::size_t dimension() const { return boundary_.size(); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }  // sorted by (row, col)
  bool boundary(std::size_t i) const { return boundary_[i]; }
  std::size_t boundary_count() const;

  std::vector<int> occupation(std::size_t index) const;
  std::size_t index(const std::vector<int>& occupation) const;
  /// Zero when the entry is absent.
  double at(std::size_t row, std::size_t col) const;

 private:
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::vector<SparseEntry> entries_;
  std::vector<bool> boundary_;
};

SparseOperator build_sparse(const OperatorExpr& expr, const std::vector<int>& cutoffs,
                            std::size_t max_dimension = kDefaultMaxDimension);

/// max |(HM - MH)_ij| over non-boundary i, j, with M = sum_i lambda_i n_i.
double commutator_interior_norm(const OperatorExpr& expr, const std::vector<std::int64_t>& lambda,
                                const std::vector<int>& cutoffs,
                                std::size_t max_dimension = kDefaultMaxDimension);
double commutator_interior_norm(const SparseOperator& h, const std::vector<std::int64_t>& lambda);

}  // namespace triwave
