#include "triwave/opspec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>

#include <boost/rational.hpp>

namespace triwave {

namespace {

constexpr int kLetters = 26;

// Per-letter creation/annihilation powers of one term, before mode mapping.
struct RawTerm {
  double coefficient = 1.0;
  std::array<int, kLetters> creation{};
  std::array<int, kLetters> annihilation{};
};

RawTerm conjugate_raw(const RawTerm& t) {
  RawTerm c = t;
  std::swap(c.creation, c.annihilation);
  return c;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> terms;
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    std::size_t group_start = 0;
    parse_group(terms);
    while (true) {
      skip_ws();
      if (at_end()) break;
      if (peek() != '+') throw ParseError(std::string("unexpected '") + peek() + "'", pos_);
      ++pos_;
      skip_ws();
      if (at_hc()) {
        if (group_start == terms.size()) throw ParseError("'hc' has no terms to conjugate", pos_);
        pos_ += 2;
        const std::size_t end = terms.size();
        for (std::size_t i = group_start; i < end; ++i) terms.push_back(conjugate_raw(terms[i]));
        group_start = terms.size();
        continue;
      }
      group_start = terms.size();
      parse_group(terms);
    }
    return terms;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  // `hc` is the keyword only when written as adjacent letters that close the group.
  bool at_hc() const {
    if (pos_ + 1 >= s_.size() || s_[pos_] != 'h' || s_[pos_ + 1] != 'c') return false;
    std::size_t j = pos_ + 2;
    while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
    return j == s_.size() || s_[j] == '+';
  }

  void parse_group(std::vector<RawTerm>& terms) {
    terms.push_back(parse_term(false));
    while (true) {
      skip_ws();
      if (at_end() || peek() != '-') return;
      ++pos_;
      terms.push_back(parse_term(true));
    }
  }

  RawTerm parse_term(bool negated) {
    RawTerm term;
    skip_ws();
    if (at_end()) throw ParseError("expected a term", pos_);
    if (peek() == '-') {
      if (negated) throw ParseError("doubled sign", pos_);
      negated = true;
      ++pos_;
      skip_ws();
    }
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
      term.coefficient = parse_number();
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
      }
    }
    if (negated) term.coefficient = -term.coefficient;

    std::array<bool, kLetters> seen_annihilation{};
    std::size_t factors = 0;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
      const char letter = peek();
      if (letter < 'a' || letter > 'z') throw ParseError("mode names are lowercase letters", pos_);
      const int idx = letter - 'a';
      ++pos_;
      skip_ws();
      bool dagger = false;
      if (!at_end() && peek() == '\'') {
        dagger = true;
        ++pos_;
        skip_ws();
        if (!at_end() && peek() == '\'') {
          throw ParseError("repeated apostrophe; write powers as repeated factors", pos_);
        }
      }
      if (dagger) {
        if (seen_annihilation[idx]) {
          throw ParseError(std::string("creation operator after annihilation for mode ") + letter,
                           pos_);
        }
        ++term.creation[idx];
      } else {
        seen_annihilation[idx] = true;
        ++term.annihilation[idx];
      }
      ++factors;
    }
    if (factors == 0) {
      if (at_end()) throw ParseError("expected an operator factor", pos_);
      throw ParseError(std::string("expected an operator factor, found '") + peek() + "'", pos_);
    }
    return term;
  }

  double parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t count = digits();
    if (!at_end() && peek() == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw ParseError("malformed number", start);
    // an exponent only when digits follow, so a mode named e stays usable
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      std::size_t j = pos_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        pos_ = j;
        digits();
      }
    }
    const std::string lexeme(s_.substr(start, pos_ - start));
    return std::strtod(lexeme.c_str(), nullptr);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool factor_less(const Factor& x, const Factor& y) {
  if (x.mode != y.mode) return x.mode < y.mode;
  if (x.dagger != y.dagger) return x.dagger;  // creation first
  return x.power < y.power;
}

bool factors_less(const std::vector<Factor>& x, const std::vector<Factor>& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), factor_less);
}

struct FactorsLess {
  bool operator()(const std::vector<Factor>& x, const std::vector<Factor>& y) const {
    return factors_less(x, y);
  }
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Monomial conjugate(const Monomial& m) {
  Monomial c{m.coefficient, m.factors};
  for (auto& f : c.factors) f.dagger = !f.dagger;
  std::sort(c.factors.begin(), c.factors.end(), factor_less);
  return c;
}

std::string to_string(const Monomial& m, const std::vector<char>& modes) {
  std::string out;
  if (m.coefficient < 0) out += '-';
  out += format_number(std::abs(m.coefficient));
  out += '*';
  bool first = true;
  for (const Factor& f : m.factors) {
    for (int p = 0; p < f.power; ++p) {
      if (!first) out += ' ';
      first = false;
      out += modes[f.mode];
      if (f.dagger) out += '\'';
    }
  }
  return out;
}

std::string to_string(const OperatorExpr& expr) {
  std::string out;
  for (std::size_t i = 0; i < expr.monomials.size(); ++i) {
    if (i > 0) out += " + ";
    out += to_string(expr.monomials[i], expr.modes);
  }
  return out;
}

OperatorExpr parse_operator(std::string_view text, const std::optional<std::vector<char>>& modes) {
  const std::vector<RawTerm> terms = Parser(text).parse();

  std::array<bool, kLetters> used{};
  for (const RawTerm& t : terms) {
    for (int l = 0; l < kLetters; ++l) used[l] = used[l] || t.creation[l] || t.annihilation[l];
  }

  OperatorExpr expr;
  std::array<int, kLetters> mode_of;
  mode_of.fill(-1);
  if (modes) {
    for (char c : *modes) {
      if (c < 'a' || c > 'z') throw std::invalid_argument(std::string("invalid mode name '") + c + "'");
      if (mode_of[c - 'a'] >= 0) throw std::invalid_argument(std::string("duplicate mode '") + c + "'");
      mode_of[c - 'a'] = static_cast<int>(expr.modes.size());
      expr.modes.push_back(c);
    }
    for (int l = 0; l < kLetters; ++l) {
      if (used[l] && mode_of[l] < 0) {
        throw std::invalid_argument(std::string("mode '") + char('a' + l) +
                                    "' is not in the mode list");
      }
    }
  } else {
    for (int l = 0; l < kLetters; ++l) {
      if (used[l]) {
        mode_of[l] = static_cast<int>(expr.modes.size());
        expr.modes.push_back(static_cast<char>('a' + l));
      }
    }
  }

  std::map<std::vector<Factor>, double, FactorsLess> combined;
  for (const RawTerm& t : terms) {
    std::vector<Factor> factors;
    for (int l = 0; l < kLetters; ++l) {
      if (t.creation[l]) factors.push_back({mode_of[l], true, t.creation[l]});
      if (t.annihilation[l]) factors.push_back({mode_of[l], false, t.annihilation[l]});
    }
    std::sort(factors.begin(), factors.end(), factor_less);
    combined[factors] += t.coefficient;
  }
  for (auto& [factors, coefficient] : combined) {
    if (coefficient != 0.0) expr.monomials.push_back({coefficient, factors});
  }

  for (const Monomial& m : expr.monomials) {
    const Monomial c = conjugate(m);
    auto it = combined.find(c.factors);
    const bool ok = it != combined.end() &&
                    std::abs(it->second - m.coefficient) <=
                        1e-12 * std::max(std::abs(it->second), std::abs(m.coefficient));
    if (!ok) throw NotHermitianError(to_string(m, expr.modes));
  }
  return expr;
}

std::vector<std::vector<std::int64_t>> net_changes(const OperatorExpr& expr) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(expr.monomials.size());
  for (const Monomial& m : expr.monomials) {
    std::vector<std::int64_t> delta(expr.mode_count(), 0);
    for (const Factor& f : m.factors) delta[f.mode] += f.dagger ? f.power : -f.power;
    out.push_back(std::move(delta));
  }
  return out;
}

namespace {

using Rational = boost::rational<std::int64_t>;

// Reduced row echelon form in place; returns the pivot column of each row.
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col].numerator() == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    const Rational lead = a[row][col];
    for (auto& x : a[row]) x /= lead;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col].numerator() == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] -= factor * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  return pivots;
}

std::vector<std::vector<Rational>> to_rational(const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return out;
}

}  // namespace

std::size_t rational_rank(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) return 0;
  auto a = to_rational(rows);
  return rref(a, rows.front().size()).size();
}

std::vector<std::vector<std::int64_t>> derive_invariants(const OperatorExpr& expr) {
  const std::size_t n = expr.mode_count();
  std::vector<std::vector<std::int64_t>> constraints;
  for (auto& delta : net_changes(expr)) {
    if (std::any_of(delta.begin(), delta.end(), [](std::int64_t d) { return d != 0; })) {
      constraints.push_back(std::move(delta));
    }
  }
  auto a = to_rational(constraints);
  const std::vector<std::size_t> pivots = rref(a, n);

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> x(n, Rational(0));
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][free];

    std::int64_t denominator_lcm = 1;
    for (const Rational& v : x) denominator_lcm = std::lcm(denominator_lcm, v.denominator());
    std::vector<std::int64_t> v(n);
    std::int64_t g = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = x[i].numerator() * (denominator_lcm / x[i].denominator());
      g = std::gcd(g, v[i]);
    }
    for (auto& c : v) c /= g;
    const auto lead = std::find_if(v.begin(), v.end(), [](std::int64_t c) { return c != 0; });
    if (*lead < 0) {
      for (auto& c : v) c = -c;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<double> resonance_defects(const OperatorExpr& expr) {
  std::vector<double> frequency(expr.mode_count(), 0.0);
  for (const Monomial& m : expr.monomials) {
    if (m.factors.size() == 2 && m.factors[0].mode == m.factors[1].mode &&
        m.factors[0].power == 1 && m.factors[1].power == 1) {
      frequency[m.factors[0].mode] += m.coefficient;
    }
  }
  std::vector<double> defects;
  const auto deltas = net_changes(expr);
  for (const auto& delta : deltas) {
    if (std::all_of(delta.begin(), delta.end(), [](std::int64_t d) { return d == 0; })) continue;
    double defect = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) defect += frequency[i] * double(delta[i]);
    defects.push_back(defect);
  }
  return defects;
}

SparseOperator::SparseOperator(std::vector<int> cutoffs, std::vector<SparseEntry> entries,
                               std::vector<bool> boundary)
    : cutoffs_(std::move(cutoffs)), entries_(std::move(entries)), boundary_(std::move(boundary)) {
  strides_.assign(cutoffs_.size(), 1);
  for (std::size_t i = cutoffs_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * static_cast<std::size_t>(cutoffs_[i] + 1);
  }
}

std::size_t SparseOperator::boundary_count() const {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), true));
}

std::vector<int> SparseOperator::occupation(std::size_t index) const {
  std::vector<int> occ(cutoffs_.size());
  for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
    occ[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return occ;
}

std::size_t SparseOperator::index(const std::vector<int>& occupation) const {
  if (occupation.size() != cutoffs_.size()) throw std::invalid_argument("occupation length mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
    if (occupation[i] < 0 || occupation[i] > cutoffs_[i]) {
      throw std::out_of_range("occupation outside the cutoff box");
    }
    idx += static_cast<std::size_t>(occupation[i]) * strides_[i];
  }
  return idx;
}

double SparseOperator::at(std::size_t row, std::size_t col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                             [](const SparseEntry& e, const std::pair<std::size_t, std::size_t>& k) {
                               return std::pair{e.row, e.col} < k;
                             });
  if (it == entries_.end() || it->row != row || it->col != col) return 0.0;
  return it->value;
}

SparseOperator build_sparse(const OperatorExpr& expr, const std::vector<int>& cutoffs,
                            std::size_t max_dimension) {
  if (cutoffs.size() != expr.mode_count()) {
    throw std::invalid_argument("need one cutoff per mode");
  }
  std::size_t dim = 1;
  for (int c : cutoffs) {
    if (c < 0) throw std::invalid_argument("cutoffs must be non-negative");
    const std::size_t extent = static_cast<std::size_t>(c) + 1;
    if (dim > max_dimension / extent) throw DimensionLimitError(dim * extent, max_dimension);
    dim *= extent;
  }
  if (dim > max_dimension) throw DimensionLimitError(dim, max_dimension);

  SparseOperator layout(cutoffs, {}, std::vector<bool>(dim, false));
  std::vector<SparseEntry> entries;
  std::vector<bool> boundary(dim, false);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::vector<int> source = layout.occupation(col);
    for (const Monomial& m : expr.monomials) {
      std::vector<int> target = source;
      std::uint64_t product = 1;
      bool vanishes = false;
      bool leaves_box = false;
      // factors are sorted creation-first per mode; annihilators act first
      for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
        int& n = target[it->mode];
        for (int p = 0; p < it->power; ++p) {
          const std::uint64_t factor = it->dagger ? std::uint64_t(n + 1) : std::uint64_t(n);
          if (factor == 0) {
            vanishes = true;
            break;
          }
          if (__builtin_mul_overflow(product, factor, &product)) {
            throw std::overflow_error("matrix element overflows 64-bit integer");
          }
          n += it->dagger ? 1 : -1;
        }
        if (vanishes) break;
        if (n > cutoffs[it->mode]) leaves_box = true;
      }
      if (vanishes) continue;
      if (leaves_box) {
        boundary[col] = true;
        continue;
      }
      entries.push_back({layout.index(target), col,
                         m.coefficient * std::sqrt(static_cast<double>(product))});
    }
  }
  // stable: repeated (row, col) pairs are summed in monomial order
  std::stable_sort(entries.begin(), entries.end(), [](const SparseEntry& x, const SparseEntry& y) {
    return std::pair{x.row, x.col} < std::pair{y.row, y.col};
  });
  std::vector<SparseEntry> merged;
  for (const SparseEntry& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back({e.row, e.col, 0.0 + e.value});
    }
  }
  return SparseOperator(cutoffs, std::move(merged), std::move(boundary));
}

double commutator_interior_norm(const SparseOperator& h, const std::vector<std::int64_t>& lambda) {
  if (lambda.size() != h.cutoffs().size()) {
    throw std::invalid_argument("lambda needs one entry per mode");
  }
  auto weight = [&](std::size_t idx) {
    const auto occ = h.occupation(idx);
    std::int64_t w = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) w += lambda[i] * occ[i];
    return w;
  };
  double worst = 0.0;
  for (const SparseEntry& e : h.entries()) {
    if (h.boundary(e.row) || h.boundary(e.col)) continue;
    const std::int64_t diff = weight(e.col) - weight(e.row);
    worst = std::max(worst, std::abs(e.value * double(diff)));
  }
  return worst;
}

double commutator_interior_norm(const OperatorExpr& expr, const std::vector<std::int64_t>& lambda,
                                const std::vector<int>& cutoffs, std::size_t max_dimension) {
  return commutator_interior_norm(build_sparse(expr, cutoffs, max_dimension), lambda);
}

}  // namespace triwave
