#include "triwave/triwave.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "triwave/analysis.hpp"
#include "triwave/audit.hpp"
#include "triwave/dynamics.hpp"
#include "triwave/eigensolver.hpp"
#include "triwave/opspec.hpp"

using namespace triwave;

struct tw_model {
  ModelParams params;
};

struct tw_spectrum {
  Spectrum spectrum;
  std::variant<TridiagonalSymmetric, SymmetricDense> matrix;
};

struct tw_scan {
  GroundScanResult result;
};

struct tw_state {
  GlobalState state;
};

struct tw_evolver {
  EvolutionContext ctx;
  GlobalState initial;
};

struct tw_operator {
  OperatorExpr expr;
};

namespace {

thread_local std::string g_last_error;

tw_status fail(tw_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
tw_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TW_OK;
  } catch (const ConvergenceError& e) {
    return fail(TW_ERR_NUMERICAL, e.what());
  } catch (const DimensionLimitError& e) {
    return fail(TW_ERR_LIMIT, e.what());
  } catch (const std::overflow_error& e) {
    return fail(TW_ERR_LIMIT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TW_ERR_INVALID, e.what());
  } catch (const std::domain_error& e) {
    return fail(TW_ERR_INVALID, e.what());
  } catch (const std::out_of_range& e) {
    return fail(TW_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(TW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TW_ERR_INTERNAL, "unknown error");
  }
}

struct NullArgument : std::invalid_argument {
  NullArgument() : std::invalid_argument("null argument") {}
};

template <typename... Ptrs>
void require(const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument();
}

template <typename T, typename Range>
tw_status copy_out(const Range& values, T* buffer, size_t capacity, size_t* needed) {
  const size_t n = std::size(values);
  if (needed) *needed = n;
  if (buffer == nullptr || capacity < n) {
    if (buffer == nullptr && needed) return TW_OK;
    return fail(TW_ERR_BUFFER, "output buffer too small: need " + std::to_string(n));
  }
  size_t i = 0;
  for (const auto& v : values) buffer[i++] = static_cast<T>(v);
  return TW_OK;
}

tw_status copy_string(const std::string& s, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buffer == nullptr) return needed ? TW_OK : fail(TW_ERR_INVALID, "null argument");
  if (capacity < s.size() + 1) return fail(TW_ERR_BUFFER, "output buffer too small");
  std::memcpy(buffer, s.c_str(), s.size() + 1);
  return TW_OK;
}

const TrilinearParams& trilinear(const tw_model* m) {
  if (const auto* p = std::get_if<TrilinearParams>(&m->params)) return *p;
  throw std::invalid_argument("operation needs a trilinear model");
}

const MicroscopicParams& microscopic(const tw_model* m) {
  if (const auto* p = std::get_if<MicroscopicParams>(&m->params)) return *p;
  throw std::invalid_argument("operation needs a microscopic model");
}

ModelKind to_kind(tw_model_kind k) {
  if (k == TW_TRILINEAR) return ModelKind::trilinear;
  if (k == TW_MICROSCOPIC) return ModelKind::microscopic;
  throw std::invalid_argument("unknown model kind");
}

CoherentSpec to_spec(const double field[6]) {
  return CoherentSpec{{Complex(field[0], field[1]), Complex(field[2], field[3]),
                       Complex(field[4], field[5])}};
}

}  // namespace

extern "C" {

const char* tw_last_error(void) { return g_last_error.c_str(); }
const char* tw_version(void) { return "1.0.0"; }

tw_status tw_model_create_trilinear(double omega_a, double omega_b, double omega_c,
                                    double kappa_re, double kappa_im, tw_model** out) {
  return guarded([&] {
    require(out);
    *out = new tw_model{TrilinearParams(omega_a, omega_b, omega_c, Complex(kappa_re, kappa_im))};
  });
}

tw_status tw_model_create_microscopic(const tw_microscopic_desc* d, tw_model** out) {
  return guarded([&] {
    require(d, out);
    MicroscopicParams p{d->omega_a, d->omega_b, d->omega_c, d->e0, d->e1,
                        d->e2,      d->g_a,     d->g_b,     d->g_c};
    p.validate();
    *out = new tw_model{p};
  });
}

void tw_model_destroy(tw_model* model) { delete model; }

tw_model_kind tw_model_kind_of(const tw_model* model) {
  return kind_of(model->params) == ModelKind::trilinear ? TW_TRILINEAR : TW_MICROSCOPIC;
}

tw_status tw_model_trilinear_info(const tw_model* model, double* omega, double* kappa,
                                  double* kappa_phase, double* detuning) {
  return guarded([&] {
    require(model);
    const TrilinearParams& p = trilinear(model);
    if (omega) {
      omega[0] = p.omega_a();
      omega[1] = p.omega_b();
      omega[2] = p.omega_c();
    }
    if (kappa) *kappa = p.kappa();
    if (kappa_phase) *kappa_phase = p.kappa_phase();
    if (detuning) *detuning = p.detuning();
  });
}

tw_status tw_model_effective(const tw_model* model, tw_model** trilinear_out,
                             double* kappa_signed, double* stark_a, double* stark_b) {
  return guarded([&] {
    require(model, trilinear_out);
    const EffectiveModel eff = effective_from_microscopic(microscopic(model));
    if (kappa_signed) *kappa_signed = eff.kappa_signed;
    if (stark_a) *stark_a = eff.stark_a;
    if (stark_b) *stark_b = eff.stark_b;
    *trilinear_out = new tw_model{eff.params};
  });
}

tw_status tw_model_dispersive_ratios(const tw_model* model, int n_a, int n_b, double* ratio_a,
                                     double* ratio_b) {
  return guarded([&] {
    require(model, ratio_a, ratio_b);
    const FockOccupation occ{{n_a, n_b, 0}, 0};
    validate(occ, ModelKind::microscopic);
    const auto r = dispersive_ratios(microscopic(model), occ);
    *ratio_a = r.ratio_a;
    *ratio_b = r.ratio_b;
  });
}

tw_status tw_model_block_basis(const tw_model* model, int m1, int m2, int* states,
                               size_t capacity, size_t* needed) {
  std::vector<int> flat;
  const tw_status s = guarded([&] {
    require(model);
    const BlockBasis basis = block_basis(kind_of(model->params), {m1, m2});
    for (const auto& occ : basis.states()) {
      flat.push_back(occ.atom_level.value_or(-1));
      flat.insert(flat.end(), occ.n.begin(), occ.n.end());
    }
  });
  if (s != TW_OK) return s;
  return copy_out(flat, states, capacity, needed);
}

tw_status tw_model_block_spectrum(const tw_model* model, int m1, int m2, double tol,
                                  tw_spectrum** out) {
  return guarded([&] {
    require(model, out);
    const BlockBasis basis = block_basis(kind_of(model->params), {m1, m2});
    if (const auto* p = std::get_if<TrilinearParams>(&model->params)) {
      TridiagonalSymmetric t = build_trilinear_block(*p, basis);
      Spectrum s = eig_tridiagonal(t, tol);
      *out = new tw_spectrum{std::move(s), std::move(t)};
    } else {
      SymmetricDense a = build_microscopic_block(std::get<MicroscopicParams>(model->params), basis);
      Spectrum s = eig_symmetric(a, tol);
      *out = new tw_spectrum{std::move(s), std::move(a)};
    }
  });
}

void tw_spectrum_destroy(tw_spectrum* spectrum) { delete spectrum; }

size_t tw_spectrum_size(const tw_spectrum* spectrum) { return spectrum->spectrum.size(); }

tw_status tw_spectrum_eigenvalues(const tw_spectrum* spectrum, double* values, size_t capacity,
                                  size_t* needed) {
  if (!spectrum) return fail(TW_ERR_INVALID, "null argument");
  return copy_out(spectrum->spectrum.eigenvalues(), values, capacity, needed);
}

tw_status tw_spectrum_eigenvector(const tw_spectrum* spectrum, size_t index, double* vector,
                                  size_t capacity, size_t* needed) {
  if (!spectrum) return fail(TW_ERR_INVALID, "null argument");
  if (index >= spectrum->spectrum.size()) return fail(TW_ERR_INVALID, "eigenvector index out of range");
  return copy_out(spectrum->spectrum.eigenvector(index), vector, capacity, needed);
}

double tw_spectrum_residual(const tw_spectrum* spectrum) {
  return std::visit([&](const auto& m) { return residual_report(m, spectrum->spectrum); },
                    spectrum->matrix);
}

double tw_spectrum_orthogonality(const tw_spectrum* spectrum) {
  return orthogonality_defect(spectrum->spectrum);
}

tw_status tw_model_ground_scan(const tw_model* model, int n_max, tw_scan** out) {
  return guarded([&] {
    require(model, out);
    if (const auto* p = std::get_if<TrilinearParams>(&model->params)) {
      *out = new tw_scan{ground_scan_trilinear(*p, n_max)};
    } else {
      *out = new tw_scan{ground_scan_microscopic(std::get<MicroscopicParams>(model->params), n_max)};
    }
  });
}

void tw_scan_destroy(tw_scan* scan) { delete scan; }

size_t tw_scan_count(const tw_scan* scan) { return scan->result.entries.size(); }

tw_status tw_scan_entry_at(const tw_scan* scan, size_t index, tw_scan_entry* out) {
  if (!scan || !out) return fail(TW_ERR_INVALID, "null argument");
  if (index >= scan->result.entries.size()) return fail(TW_ERR_INVALID, "scan index out of range");
  const GroundScanEntry& e = scan->result.entries[index];
  *out = tw_scan_entry{e.n,
                       e.block.m1,
                       e.block.m2,
                       e.ground_energy,
                       e.estimate,
                       e.lower_bound.has_value() ? 1 : 0,
                       e.lower_bound.value_or(0.0)};
  return TW_OK;
}

void tw_scan_crossing(const tw_scan* scan, int* has_crossing, int* crossing_n) {
  if (has_crossing) *has_crossing = scan->result.crossing.has_value() ? 1 : 0;
  if (crossing_n) *crossing_n = scan->result.crossing.value_or(0);
}

void tw_scan_estimate_crossing(const tw_scan* scan, int* has_estimate, double* estimate) {
  if (has_estimate) *has_estimate = scan->result.estimate_crossing.has_value() ? 1 : 0;
  if (estimate) *estimate = scan->result.estimate_crossing.value_or(0.0);
}

int tw_scan_bound_respected(const tw_scan* scan) { return scan->result.bound_respected ? 1 : 0; }

tw_status tw_coherent_energy_trilinear(const tw_model* model, const double field[6],
                                       double* energy) {
  return guarded([&] {
    require(model, field, energy);
    const CoherentSpec s = to_spec(field);
    *energy = coherent_energy_trilinear(trilinear(model), s.amplitudes[0], s.amplitudes[1],
                                        s.amplitudes[2]);
  });
}

tw_status tw_worst_phase_energy(const tw_model* model, double r, double* energy) {
  return guarded([&] {
    require(model, energy);
    *energy = worst_phase_energy(trilinear(model), r);
  });
}

tw_status tw_eq7_estimate(const tw_model* model, int n, double* energy) {
  return guarded([&] {
    require(model, energy);
    *energy = eq7_estimate(trilinear(model), n);
  });
}

tw_status tw_coherent_energy_microscopic(const tw_model* model, const double field[6],
                                         const double atom[6], double* energy) {
  return guarded([&] {
    require(model, field, atom, energy);
    const CoherentSpec s = to_spec(field);
    const AtomAmplitudes a{Complex(atom[0], atom[1]), Complex(atom[2], atom[3]),
                           Complex(atom[4], atom[5])};
    *energy = coherent_energy_microscopic(microscopic(model), s.amplitudes[0], s.amplitudes[1],
                                          s.amplitudes[2], a);
  });
}

tw_status tw_min_atom_energy_microscopic(const tw_model* model, double alpha, double beta,
                                         double gamma, double* energy) {
  return guarded([&] {
    require(model, energy);
    *energy = min_atom_energy_microscopic(microscopic(model), alpha, beta, gamma);
  });
}

tw_status tw_microscopic_energy_lower_bound(const tw_model* model, double r, double* bound) {
  return guarded([&] {
    require(model, bound);
    *bound = microscopic_energy_lower_bound(microscopic(model), r);
  });
}

tw_status tw_state_create_fock(tw_model_kind kind, int atom_level, int n_a, int n_b, int n_c,
                               tw_state** out) {
  return guarded([&] {
    require(out);
    const ModelKind k = to_kind(kind);
    FockOccupation occ{{n_a, n_b, n_c}, std::nullopt};
    if (k == ModelKind::microscopic) occ.atom_level = atom_level;
    *out = new tw_state{init_fock(k, occ)};
  });
}

tw_status tw_state_create_coherent(tw_model_kind kind, const double field[6],
                                   double tail_epsilon, tw_state** out) {
  return guarded([&] {
    require(field, out);
    *out = new tw_state{init_coherent(to_kind(kind), to_spec(field), tail_epsilon)};
  });
}

void tw_state_destroy(tw_state* state) { delete state; }
size_t tw_state_block_count(const tw_state* state) { return state->state.blocks.size(); }
double tw_state_tail_bound(const tw_state* state) { return state->state.tail_bound; }

tw_status tw_evolver_create(const tw_model* model, const tw_state* initial, double tol,
                            tw_evolver** out) {
  return guarded([&] {
    require(model, initial, out);
    auto ev = std::make_unique<tw_evolver>(tw_evolver{EvolutionContext(model->params, tol),
                                                      initial->state});
    ev->ctx.prepare(ev->initial);
    *out = ev.release();
  });
}

void tw_evolver_destroy(tw_evolver* evolver) { delete evolver; }

tw_status tw_evolver_observe(const tw_evolver* evolver, double t, tw_record* out) {
  return guarded([&] {
    require(evolver, out);
    const TrajectoryRecord r = observe(evolver->initial, evolver->ctx, t);
    *out = tw_record{r.t,     r.n_a,   r.n_b,   r.n_c,   r.m1,     r.m2,
                     r.re_bc, r.im_bc, r.abs_b, r.abs_c, r.energy, r.tail_bound};
  });
}

tw_status tw_evolver_atom_populations(const tw_evolver* evolver, double t,
                                      double populations[3]) {
  return guarded([&] {
    require(evolver, populations);
    const auto numbers = expect_numbers(evolve(evolver->initial, evolver->ctx, t));
    for (int i = 0; i < 3; ++i) populations[i] = numbers.atom_levels[i];
  });
}

tw_status tw_operator_parse(const char* text, const char* modes, tw_operator** out) {
  return guarded([&] {
    require(text, out);
    std::optional<std::vector<char>> mode_list;
    if (modes) {
      mode_list.emplace();
      std::string token;
      auto flush = [&] {
        if (token.size() != 1) {
          throw std::invalid_argument("mode names must be single letters: '" + token + "'");
        }
        mode_list->push_back(token[0]);
        token.clear();
      };
      for (const char* c = modes; *c; ++c) {
        if (*c == ',') flush();
        else if (*c != ' ') token += *c;
      }
      flush();
    }
    *out = new tw_operator{parse_operator(text, mode_list)};
  });
}

void tw_operator_destroy(tw_operator* op) { delete op; }
size_t tw_operator_mode_count(const tw_operator* op) { return op->expr.mode_count(); }
size_t tw_operator_monomial_count(const tw_operator* op) { return op->expr.monomials.size(); }

tw_status tw_operator_modes(const tw_operator* op, char* buffer, size_t capacity, size_t* needed) {
  if (!op) return fail(TW_ERR_INVALID, "null argument");
  return copy_string(std::string(op->expr.modes.begin(), op->expr.modes.end()), buffer, capacity,
                     needed);
}

tw_status tw_operator_canonical(const tw_operator* op, char* buffer, size_t capacity,
                                size_t* needed) {
  if (!op) return fail(TW_ERR_INVALID, "null argument");
  return copy_string(to_string(op->expr), buffer, capacity, needed);
}

namespace {

std::vector<int64_t> flatten(const std::vector<std::vector<int64_t>>& rows) {
  std::vector<int64_t> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return flat;
}

std::vector<int> to_cutoffs(const tw_operator* op, const int* cutoffs) {
  return std::vector<int>(cutoffs, cutoffs + op->expr.mode_count());
}

std::size_t limit(size_t max_dimension) {
  return max_dimension == 0 ? kDefaultMaxDimension : max_dimension;
}

}  // namespace

tw_status tw_operator_net_changes(const tw_operator* op, int64_t* values, size_t capacity,
                                  size_t* needed) {
  if (!op) return fail(TW_ERR_INVALID, "null argument");
  return copy_out(flatten(net_changes(op->expr)), values, capacity, needed);
}

tw_status tw_operator_invariants(const tw_operator* op, int64_t* values, size_t capacity,
                                 size_t* needed) {
  std::vector<int64_t> flat;
  const tw_status s = guarded([&] {
    require(op);
    flat = flatten(derive_invariants(op->expr));
  });
  if (s != TW_OK) return s;
  return copy_out(flat, values, capacity, needed);
}

tw_status tw_operator_resonance_defects(const tw_operator* op, double* values, size_t capacity,
                                        size_t* needed) {
  if (!op) return fail(TW_ERR_INVALID, "null argument");
  return copy_out(resonance_defects(op->expr), values, capacity, needed);
}

tw_status tw_operator_sparse_info(const tw_operator* op, const int* cutoffs, size_t max_dimension,
                                  tw_sparse_info* out) {
  return guarded([&] {
    require(op, cutoffs, out);
    const SparseOperator h = build_sparse(op->expr, to_cutoffs(op, cutoffs), limit(max_dimension));
    *out = tw_sparse_info{h.dimension(), h.entries().size(), h.boundary_count()};
  });
}

tw_status tw_operator_commutator_norm(const tw_operator* op, const int64_t* lambda,
                                      const int* cutoffs, size_t max_dimension, double* out) {
  return guarded([&] {
    require(op, lambda, cutoffs, out);
    const std::vector<int64_t> l(lambda, lambda + op->expr.mode_count());
    *out = commutator_interior_norm(op->expr, l, to_cutoffs(op, cutoffs), limit(max_dimension));
  });
}

tw_status tw_model_audit_blocks(const tw_model* model, const int cutoffs[3], size_t max_dimension,
                                tw_block_audit* out) {
  return guarded([&] {
    require(model, cutoffs, out);
    const BlockAuditReport r = audit_trilinear_blocks(
        trilinear(model), {cutoffs[0], cutoffs[1], cutoffs[2]}, limit(max_dimension));
    *out = tw_block_audit{r.dimension, r.blocks, r.cross_block_entries, r.max_abs_deviation};
  });
}

}  // extern "C"
