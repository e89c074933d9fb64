// triwave: command-line front end over the C interface of libtriwave.

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "triwave/triwave.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ApiError : public std::runtime_error {
 public:
  ApiError(tw_status status, const std::string& what) : std::runtime_error(what), status(status) {}
  tw_status status;
};

void check(tw_status status) {
  if (status != TW_OK) throw ApiError(status, tw_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
template <class T, void (*Destroy)(T*)>
using Owned = std::unique_ptr<T, Deleter<T, Destroy>>;

using Model = Owned<tw_model, tw_model_destroy>;
using Spectrum = Owned<tw_spectrum, tw_spectrum_destroy>;
using Scan = Owned<tw_scan, tw_scan_destroy>;
using State = Owned<tw_state, tw_state_destroy>;
using Evolver = Owned<tw_evolver, tw_evolver_destroy>;
using Operator = Owned<tw_operator, tw_operator_destroy>;

template <class Handle, class F>
Handle create(F&& f) {
  typename Handle::pointer raw = nullptr;
  check(f(&raw));
  return Handle(raw);
}

struct Options {
  std::string model = "trilinear";
  std::optional<double> omega_a, omega_b, omega_c;
  std::optional<double> kappa;
  double kappa_phase = 0.0;
  double e0 = 0.0;
  std::optional<double> e1, e2;
  std::optional<double> g, g_a, g_b, g_c;
  std::optional<std::string> block;
  std::optional<int> n_max, q_max;
  std::string initial = "fock";
  std::optional<std::string> occupation;
  int atom = 0;
  std::string alpha = "0", beta = "0", gamma = "0";
  std::optional<double> t_start, t_end;
  int steps = 100;
  double tail_epsilon = 1e-8;
  double r_start = 0.0, r_end = 10.0;
  double tol = 1e-12;
  std::optional<std::string> interaction;
  std::optional<std::string> modes;
  std::optional<std::string> cutoffs;
  std::string format = "json";
  std::optional<std::string> output;
};

// ---- small parsers for comma-separated flag values ----

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  for (char c : text + ',') {
    if (c == ',') {
      parts.push_back(token);
      token.clear();
    } else if (c != ' ') {
      token += c;
    }
  }
  return parts;
}

double to_double(const std::string& token, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used == token.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(flag + ": '" + token + "' is not a finite number");
}

int to_int(const std::string& token, const std::string& flag) {
  try {
    std::size_t used = 0;
    const long v = std::stol(token, &used);
    if (used == token.size() && v >= INT32_MIN && v <= INT32_MAX) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw UsageError(flag + ": '" + token + "' is not an integer");
}

std::vector<int> int_list(const std::string& text, std::size_t count, const std::string& flag) {
  const auto parts = split(text);
  if (parts.size() != count) {
    throw UsageError(flag + ": expected " + std::to_string(count) + " comma-separated integers");
  }
  std::vector<int> values;
  for (const auto& p : parts) values.push_back(to_int(p, flag));
  return values;
}

std::complex<double> complex_value(const std::string& text, const std::string& flag) {
  const auto parts = split(text);
  if (parts.empty() || parts.size() > 2) throw UsageError(flag + ": expected 're' or 're,im'");
  return {to_double(parts[0], flag), parts.size() == 2 ? to_double(parts[1], flag) : 0.0};
}

double need(const std::optional<double>& v, const std::string& flag, const std::string& why) {
  if (!v) throw UsageError(flag + " is required " + why);
  return *v;
}

std::size_t max_dimension() {
  const char* env = std::getenv("TRIWAVE_MAX_DIM");
  if (!env || !*env) return 0;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || v == 0 || env[0] == '-') {
    throw UsageError(std::string("TRIWAVE_MAX_DIM: '") + env + "' is not a positive integer");
  }
  return static_cast<std::size_t>(v);
}

// ---- output ----

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_container(const Json& j) { return j.is_object() || j.is_array(); }

// Objects and arrays of containers are laid out one entry per line down to
// depth 2; everything deeper is written inline.
void emit(const Json& j, std::string& out, int depth) {
  const bool expand = depth < 2;
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::null:
    case Json::value_t::discarded:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case Json::value_t::number_float:
      out += number(j.get<double>());
      break;
    case Json::value_t::string:
      out += j.dump();
      break;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += expand ? "{\n" : "{";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += expand ? ",\n" : ", ";
        first = false;
        if (expand) out += pad;
        out += Json(key).dump() + ": ";
        emit(value, out, depth + 1);
      }
      out += expand ? "\n" + close_pad + "}" : "}";
      break;
    }
    case Json::value_t::array: {
      const bool rows = expand && !j.empty() && is_container(j.front()) && j.front().is_object();
      out += rows ? "[\n" : "[";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += rows ? ",\n" : ", ";
        first = false;
        if (rows) out += pad;
        emit(value, out, rows ? 2 : depth + 1);
      }
      out += rows ? "\n" + close_pad + "]" : "]";
      break;
    }
    case Json::value_t::binary:
      throw std::logic_error("binary JSON values are not emitted");
  }
}

std::string csv_field(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  std::string out;
  emit(j, out, 3);
  return out;
}

// CSV carries the records table; field names match the JSON records.
std::string to_csv(const Json& report) {
  std::string out;
  const Json& records = report.at("records");
  if (records.empty()) return out;
  bool first = true;
  for (const auto& [key, value] : records.front().items()) {
    out += (first ? "" : ",") + key;
    first = false;
  }
  out += "\n";
  for (const auto& row : records) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      out += (first ? "" : ",") + csv_field(value);
      first = false;
    }
    out += "\n";
  }
  return out;
}

void write_report(const Options& o, const Json& report) {
  std::string text;
  if (o.format == "csv") {
    text = to_csv(report);
  } else {
    emit(report, text, 0);
    text += "\n";
  }
  if (!o.output) {
    std::cout << text;
    return;
  }
  std::ofstream file(*o.output, std::ios::binary);
  if (!file) throw UsageError("--output: cannot open '" + *o.output + "' for writing");
  file << text;
  if (!file.flush()) throw UsageError("--output: failed writing '" + *o.output + "'");
}

// ---- models ----

struct ModelInfo {
  Model model;
  bool microscopic = false;
  Json parameters;
  std::vector<std::string> warnings;
};

ModelInfo build_model(const Options& o) {
  ModelInfo info;
  const std::string why = "for --model " + o.model;
  const double wa = need(o.omega_a, "--omega-a", why);
  const double wb = need(o.omega_b, "--omega-b", why);
  const double wc = need(o.omega_c, "--omega-c", why);
  info.parameters["model"] = o.model;
  info.parameters["omega_a"] = wa;
  info.parameters["omega_b"] = wb;
  info.parameters["omega_c"] = wc;
  if (o.model == "trilinear") {
    const std::complex<double> k = std::polar(need(o.kappa, "--kappa", why), o.kappa_phase);
    info.model = create<Model>([&](tw_model** out) {
      return tw_model_create_trilinear(wa, wb, wc, k.real(), k.imag(), out);
    });
    double omega[3], kappa, phase, detuning;
    check(tw_model_trilinear_info(info.model.get(), omega, &kappa, &phase, &detuning));
    info.parameters["kappa"] = kappa;
    info.parameters["kappa_phase"] = phase;
    info.parameters["detuning"] = detuning;
    if (std::abs(detuning) > 1e-12) {
      info.warnings.push_back("detuned: omega_a - omega_b - omega_c = " + number(detuning));
    }
    return info;
  }
  info.microscopic = true;
  tw_microscopic_desc d{};
  d.omega_a = wa;
  d.omega_b = wb;
  d.omega_c = wc;
  d.e0 = o.e0;
  d.e1 = need(o.e1, "--e1", why);
  d.e2 = need(o.e2, "--e2", why);
  const double g = o.g.value_or(0.0);
  d.g_a = o.g_a.value_or(g);
  d.g_b = o.g_b.value_or(g);
  d.g_c = o.g_c.value_or(g);
  info.model = create<Model>([&](tw_model** out) { return tw_model_create_microscopic(&d, out); });
  info.parameters["e0"] = d.e0;
  info.parameters["e1"] = d.e1;
  info.parameters["e2"] = d.e2;
  info.parameters["g_a"] = d.g_a;
  info.parameters["g_b"] = d.g_b;
  info.parameters["g_c"] = d.g_c;
  info.parameters["delta"] = d.e2 - d.e0 - d.omega_a;
  info.parameters["Delta"] = d.e1 - d.e0 - d.omega_b;
  if (o.kappa) info.warnings.push_back("--kappa is ignored for the microscopic model");
  return info;
}

Json header(const std::string& command, const ModelInfo* model) {
  Json report;
  report["command"] = command;
  report["version"] = tw_version();
  if (model) {
    report["parameters"] = model->parameters;
    report["warnings"] = model->warnings;
    for (const auto& w : model->warnings) std::cerr << "warning: " << w << "\n";
  } else {
    report["warnings"] = Json::array();
  }
  return report;
}

std::vector<double> time_grid(const Options& o, double default_end) {
  const double start = o.t_start.value_or(0.0);
  const double end = o.t_end.value_or(default_end);
  if (!std::isfinite(end)) throw UsageError("--t-end is required");
  if (end < start) throw UsageError("--t-end must not be smaller than --t-start");
  std::vector<double> times;
  for (int i = 0; i <= o.steps; ++i) times.push_back(start + (end - start) * i / o.steps);
  return times;
}

struct Initial {
  State state;
  Json description;
  std::array<int, 3> photons{0, 0, 0};  // for dispersive ratios
};

Initial initial_state(const Options& o, tw_model_kind kind, const std::string& default_occupation) {
  Initial init;
  init.description["initial"] = o.initial;
  if (o.initial == "fock") {
    if (!o.occupation && default_occupation.empty()) {
      throw UsageError("--occupation is required for --initial fock");
    }
    const auto n = int_list(o.occupation.value_or(default_occupation), 3, "--occupation");
    init.photons = {n[0], n[1], n[2]};
    const int atom = kind == TW_MICROSCOPIC ? o.atom : -1;
    init.state = create<State>(
        [&](tw_state** out) { return tw_state_create_fock(kind, atom, n[0], n[1], n[2], out); });
    init.description["occupation"] = n;
    if (kind == TW_MICROSCOPIC) init.description["atom"] = o.atom;
    return init;
  }
  const auto a = complex_value(o.alpha, "--alpha");
  const auto b = complex_value(o.beta, "--beta");
  const auto c = complex_value(o.gamma, "--gamma");
  const double field[6] = {a.real(), a.imag(), b.real(), b.imag(), c.real(), c.imag()};
  init.state = create<State>([&](tw_state** out) {
    return tw_state_create_coherent(kind, field, o.tail_epsilon, out);
  });
  init.photons = {static_cast<int>(std::ceil(std::norm(a))), static_cast<int>(std::ceil(std::norm(b))),
                  static_cast<int>(std::ceil(std::norm(c)))};
  init.description["alpha"] = {a.real(), a.imag()};
  init.description["beta"] = {b.real(), b.imag()};
  init.description["gamma"] = {c.real(), c.imag()};
  init.description["tail_epsilon"] = o.tail_epsilon;
  return init;
}

Json record_json(const tw_record& r, const double populations[3]) {
  Json j;
  j["t"] = r.t;
  j["n_a"] = r.n_a;
  j["n_b"] = r.n_b;
  j["n_c"] = r.n_c;
  j["m1"] = r.m1;
  j["m2"] = r.m2;
  j["re_bc"] = r.re_bc;
  j["im_bc"] = r.im_bc;
  j["abs_b"] = r.abs_b;
  j["abs_c"] = r.abs_c;
  j["energy"] = r.energy;
  j["tail_bound"] = r.tail_bound;
  j["p_atom0"] = populations[0];
  j["p_atom1"] = populations[1];
  j["p_atom2"] = populations[2];
  return j;
}

double relative_drift(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

// ---- subcommands ----

Json run_spectrum(const Options& o) {
  ModelInfo m = build_model(o);
  if (!o.block) throw UsageError("--block is required");
  const auto b = int_list(*o.block, 2, "--block");
  const Spectrum s = create<Spectrum>(
      [&](tw_spectrum** out) { return tw_model_block_spectrum(m.model.get(), b[0], b[1], o.tol, out); });
  const std::size_t n = tw_spectrum_size(s.get());
  std::vector<double> values(n);
  std::size_t needed = 0;
  check(tw_spectrum_eigenvalues(s.get(), values.data(), n, &needed));

  std::vector<int> raw(4 * n);
  check(tw_model_block_basis(m.model.get(), b[0], b[1], raw.data(), raw.size(), &needed));
  Json basis = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json state;
    if (m.microscopic) state["atom"] = raw[4 * i];
    state["n_a"] = raw[4 * i + 1];
    state["n_b"] = raw[4 * i + 2];
    state["n_c"] = raw[4 * i + 3];
    basis.push_back(state);
  }

  Json report = header("spectrum", &m);
  report["block"] = b;
  report["dimension"] = n;
  report["basis"] = basis;
  report["eigenvalues"] = values;
  Json vectors = Json::array();
  Json records = Json::array();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    check(tw_spectrum_eigenvector(s.get(), i, v.data(), n, &needed));
    vectors.push_back(v);
    records.push_back({{"index", i}, {"eigenvalue", values[i]}});
  }
  report["eigenvectors"] = vectors;
  report["records"] = records;
  report["summary"] = {{"residual", tw_spectrum_residual(s.get())},
                       {"orthogonality", tw_spectrum_orthogonality(s.get())}};
  return report;
}

Json run_scan_ground(const Options& o) {
  ModelInfo m = build_model(o);
  int limit = 0;
  if (m.microscopic) {
    if (o.n_max) throw UsageError("--n-max applies to --model trilinear; use --q-max");
    if (!o.q_max) throw UsageError("--q-max is required for --model microscopic");
    limit = *o.q_max;
  } else {
    if (o.q_max) throw UsageError("--q-max applies to --model microscopic; use --n-max");
    if (!o.n_max) throw UsageError("--n-max is required for --model trilinear");
    limit = *o.n_max;
  }
  const Scan scan =
      create<Scan>([&](tw_scan** out) { return tw_model_ground_scan(m.model.get(), limit, out); });
  Json records = Json::array();
  for (std::size_t i = 0; i < tw_scan_count(scan.get()); ++i) {
    tw_scan_entry e;
    check(tw_scan_entry_at(scan.get(), i, &e));
    Json r;
    r["N"] = e.n;
    r["block_m1"] = e.block_m1;
    r["block_m2"] = e.block_m2;
    r["ground_energy"] = e.ground_energy;
    r["eq7_estimate"] = m.microscopic ? Json() : Json(e.estimate);
    r["lower_bound"] = e.has_lower_bound ? Json(e.lower_bound) : Json();
    records.push_back(r);
  }
  int has = 0, crossing = 0, has_estimate = 0;
  double estimate = 0.0;
  tw_scan_crossing(scan.get(), &has, &crossing);
  tw_scan_estimate_crossing(scan.get(), &has_estimate, &estimate);
  Json report = header("scan-ground", &m);
  report["records"] = records;
  report["summary"] = {{"crossing_N", has ? Json(crossing) : Json()},
                       {"estimate_crossing", has_estimate ? Json(estimate) : Json()},
                       {"bound_respected", tw_scan_bound_respected(scan.get()) != 0}};
  return report;
}

Json run_evolve(const Options& o) {
  ModelInfo m = build_model(o);
  const tw_model_kind kind = m.microscopic ? TW_MICROSCOPIC : TW_TRILINEAR;
  Initial init = initial_state(o, kind, "");
  const auto times = time_grid(o, NAN);
  const Evolver ev = create<Evolver>(
      [&](tw_evolver** out) { return tw_evolver_create(m.model.get(), init.state.get(), o.tol, out); });
  Json records = Json::array();
  tw_record first{};
  double drift_m1 = 0, drift_m2 = 0, drift_energy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    tw_record r;
    double pops[3];
    check(tw_evolver_observe(ev.get(), times[i], &r));
    check(tw_evolver_atom_populations(ev.get(), times[i], pops));
    if (i == 0) first = r;
    drift_m1 = std::max(drift_m1, relative_drift(r.m1, first.m1));
    drift_m2 = std::max(drift_m2, relative_drift(r.m2, first.m2));
    drift_energy = std::max(drift_energy, relative_drift(r.energy, first.energy));
    records.push_back(record_json(r, pops));
  }
  Json report = header("evolve", &m);
  report["state"] = init.description;
  report["records"] = records;
  report["summary"] = {{"blocks", tw_state_block_count(init.state.get())},
                       {"tail_bound", tw_state_tail_bound(init.state.get())},
                       {"max_relative_drift_m1", drift_m1},
                       {"max_relative_drift_m2", drift_m2},
                       {"max_relative_drift_energy", drift_energy}};
  return report;
}

Json run_compare_effective(const Options& o) {
  if (o.model != "microscopic") throw UsageError("--model must be microscopic for compare-effective");
  if (o.initial == "fock" && o.atom != 0) {
    throw UsageError("--atom must be 0: the reduced model has no atom");
  }
  ModelInfo m = build_model(o);
  double kappa_signed, stark_a, stark_b;
  const Model eff = create<Model>([&](tw_model** out) {
    return tw_model_effective(m.model.get(), out, &kappa_signed, &stark_a, &stark_b);
  });
  double omega[3], kappa, phase, detuning;
  check(tw_model_trilinear_info(eff.get(), omega, &kappa, &phase, &detuning));

  Initial micro_init = initial_state(o, TW_MICROSCOPIC, "1,0,0");
  Initial eff_init = initial_state(o, TW_TRILINEAR, "1,0,0");
  double ratio_a, ratio_b;
  check(tw_model_dispersive_ratios(m.model.get(), micro_init.photons[0], micro_init.photons[1],
                                   &ratio_a, &ratio_b));
  const double half_period = kappa > 0 ? std::numbers::pi / (2 * kappa) : NAN;
  const auto times = time_grid(o, half_period);

  const Evolver micro = create<Evolver>([&](tw_evolver** out) {
    return tw_evolver_create(m.model.get(), micro_init.state.get(), o.tol, out);
  });
  const Evolver reduced = create<Evolver>(
      [&](tw_evolver** out) { return tw_evolver_create(eff.get(), eff_init.state.get(), o.tol, out); });
  Json records = Json::array();
  double max_dev_a = 0, max_dev = 0;
  for (double t : times) {
    tw_record x, y;
    check(tw_evolver_observe(micro.get(), t, &x));
    check(tw_evolver_observe(reduced.get(), t, &y));
    const double da = std::abs(x.n_a - y.n_a);
    max_dev_a = std::max(max_dev_a, da);
    max_dev = std::max({max_dev, da, std::abs(x.n_b - y.n_b), std::abs(x.n_c - y.n_c)});
    records.push_back({{"t", t},
                       {"n_a_micro", x.n_a},
                       {"n_a_eff", y.n_a},
                       {"n_b_micro", x.n_b},
                       {"n_b_eff", y.n_b},
                       {"n_c_micro", x.n_c},
                       {"n_c_eff", y.n_c},
                       {"deviation_n_a", da}});
  }
  Json report = header("compare-effective", &m);
  report["state"] = micro_init.description;
  report["effective"] = {{"omega_a", omega[0]},   {"omega_b", omega[1]}, {"omega_c", omega[2]},
                         {"kappa", kappa},        {"kappa_signed", kappa_signed},
                         {"stark_a", stark_a},    {"stark_b", stark_b},  {"detuning", detuning},
                         {"ratio_a", ratio_a},    {"ratio_b", ratio_b}};
  report["records"] = records;
  report["summary"] = {{"half_period", half_period},
                       {"max_deviation_n_a", max_dev_a},
                       {"max_deviation", max_dev}};
  return report;
}

Json run_coherent_energy(const Options& o) {
  ModelInfo m = build_model(o);
  if (o.r_end < o.r_start) throw UsageError("--r-end must not be smaller than --r-start");
  if (o.r_start < 0) throw UsageError("--r-start must be non-negative");
  Json records = Json::array();
  std::optional<double> first_negative;
  bool bound_respected = true;
  for (int i = 0; i <= o.steps; ++i) {
    const double r = o.r_start + (o.r_end - o.r_start) * i / o.steps;
    Json rec;
    rec["r"] = r;
    if (!m.microscopic) {
      const double field[6] = {r, 0, r, 0, r, 0};
      double aligned, worst;
      check(tw_coherent_energy_trilinear(m.model.get(), field, &aligned));
      check(tw_worst_phase_energy(m.model.get(), r, &worst));
      rec["energy_aligned"] = aligned;
      rec["energy_worst_phase"] = worst;
      rec["lower_bound"] = nullptr;
      if (worst < 0 && !first_negative) first_negative = r;
    } else {
      double aligned, bound;
      check(tw_min_atom_energy_microscopic(m.model.get(), r, r, r, &aligned));
      // lowest over the real sign patterns of the three amplitudes
      double worst = aligned;
      for (int s = 1; s < 8; ++s) {
        double e;
        check(tw_min_atom_energy_microscopic(m.model.get(), s & 1 ? -r : r, s & 2 ? -r : r,
                                             s & 4 ? -r : r, &e));
        worst = std::min(worst, e);
      }
      check(tw_microscopic_energy_lower_bound(m.model.get(), r, &bound));
      rec["energy_aligned"] = aligned;
      rec["energy_worst_phase"] = worst;
      rec["lower_bound"] = bound;
      bound_respected = bound_respected && worst >= bound;
      if (worst < 0 && !first_negative) first_negative = r;
    }
    records.push_back(rec);
  }
  Json report = header("coherent-energy", &m);
  report["records"] = records;
  report["summary"] = {{"first_negative_r", first_negative ? Json(*first_negative) : Json()},
                       {"bound_respected", m.microscopic ? Json(bound_respected) : Json()}};
  return report;
}

struct ParsedOperator {
  Operator op;
  std::string modes;
  std::size_t mode_count = 0;
};

ParsedOperator parse_interaction(const std::string& text, const std::optional<std::string>& modes) {
  ParsedOperator p;
  p.op = create<Operator>([&](tw_operator** out) {
    return tw_operator_parse(text.c_str(), modes ? modes->c_str() : nullptr, out);
  });
  p.mode_count = tw_operator_mode_count(p.op.get());
  std::size_t needed = 0;
  check(tw_operator_modes(p.op.get(), nullptr, 0, &needed));
  std::string buffer(needed, '\0');
  check(tw_operator_modes(p.op.get(), buffer.data(), buffer.size(), &needed));
  p.modes = buffer.c_str();
  return p;
}

std::vector<std::vector<std::int64_t>> rows_of(const std::vector<std::int64_t>& flat, std::size_t width) {
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t i = 0; i + width <= flat.size(); i += width) {
    rows.emplace_back(flat.begin() + i, flat.begin() + i + width);
  }
  return rows;
}

std::vector<std::vector<std::int64_t>> invariants_of(const ParsedOperator& p) {
  std::size_t needed = 0;
  check(tw_operator_invariants(p.op.get(), nullptr, 0, &needed));
  std::vector<std::int64_t> flat(needed);
  check(tw_operator_invariants(p.op.get(), flat.data(), flat.size(), &needed));
  return rows_of(flat, p.mode_count);
}

Json mode_names(const std::string& modes) {
  Json names = Json::array();
  for (char c : modes) names.push_back(std::string(1, c));
  return names;
}

Json run_invariants(const Options& o) {
  if (!o.interaction) throw UsageError("--interaction is required");
  const ParsedOperator p = parse_interaction(*o.interaction, o.modes);
  const auto basis = invariants_of(p);

  std::size_t needed = 0;
  check(tw_operator_net_changes(p.op.get(), nullptr, 0, &needed));
  std::vector<std::int64_t> flat(needed);
  check(tw_operator_net_changes(p.op.get(), flat.data(), flat.size(), &needed));
  check(tw_operator_resonance_defects(p.op.get(), nullptr, 0, &needed));
  std::vector<double> defects(needed);
  check(tw_operator_resonance_defects(p.op.get(), defects.data(), defects.size(), &needed));
  check(tw_operator_canonical(p.op.get(), nullptr, 0, &needed));
  std::string canonical(needed, '\0');
  check(tw_operator_canonical(p.op.get(), canonical.data(), canonical.size(), &needed));

  Json report = header("invariants", nullptr);
  report["interaction"] = *o.interaction;
  report["canonical"] = canonical.c_str();
  report["modes"] = mode_names(p.modes);
  report["basis"] = basis;
  report["net_changes"] = rows_of(flat, p.mode_count);
  report["resonance_defects"] = defects;
  Json records = Json::array();
  for (const auto& v : basis) {
    Json r;
    for (std::size_t k = 0; k < p.mode_count; ++k) r[std::string(1, p.modes[k])] = v[k];
    records.push_back(r);
  }
  report["records"] = records;
  report["summary"] = {{"rank", basis.size()}, {"mode_count", p.mode_count}};
  return report;
}

std::string lambda_text(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

Json run_audit(const Options& o) {
  std::optional<ModelInfo> m;
  std::string text;
  if (o.interaction) {
    text = *o.interaction;
  } else {
    if (o.model != "trilinear") {
      throw UsageError("--interaction is required unless --model trilinear parameters are given");
    }
    m = build_model(o);
    double omega[3], kappa, phase, detuning;
    check(tw_model_trilinear_info(m->model.get(), omega, &kappa, &phase, &detuning));
    text = number(omega[0]) + "*a' a + " + number(omega[1]) + "*b' b + " + number(omega[2]) +
           "*c' c + " + number(kappa) + "*a' b c + hc";
  }
  const ParsedOperator p = parse_interaction(text, o.interaction ? o.modes : std::nullopt);
  if (!o.cutoffs) throw UsageError("--cutoffs is required");
  std::vector<int> cutoffs;
  const auto parts = split(*o.cutoffs);
  if (parts.size() == 1) {
    cutoffs.assign(p.mode_count, to_int(parts[0], "--cutoffs"));
  } else {
    cutoffs = int_list(*o.cutoffs, p.mode_count, "--cutoffs");
  }
  const std::size_t limit = max_dimension();

  tw_sparse_info info;
  check(tw_operator_sparse_info(p.op.get(), cutoffs.data(), limit, &info));
  const auto basis = invariants_of(p);
  Json records = Json::array();
  bool commute = true;
  auto add = [&](const std::vector<std::int64_t>& lambda, const char* kind) {
    double norm = 0.0;
    check(tw_operator_commutator_norm(p.op.get(), lambda.data(), cutoffs.data(), limit, &norm));
    if (std::string(kind) == "invariant") commute = commute && norm == 0.0;
    records.push_back({{"lambda", lambda_text(lambda)}, {"kind", kind}, {"commutator_norm", norm}});
  };
  for (const auto& v : basis) add(v, "invariant");
  for (std::size_t k = 0; k < p.mode_count; ++k) {
    std::vector<std::int64_t> unit(p.mode_count, 0);
    unit[k] = 1;
    add(unit, "number");
  }

  Json report = header("audit", m ? &*m : nullptr);
  report["interaction"] = text;
  report["modes"] = mode_names(p.modes);
  report["cutoffs"] = cutoffs;
  report["sparse"] = {{"dimension", info.dimension},
                      {"nonzeros", info.nonzeros},
                      {"boundary_states", info.boundary_states}};
  report["basis"] = basis;
  report["records"] = records;
  Json summary = {{"invariants_commute", commute}};
  if (m) {
    if (cutoffs.size() != 3) throw UsageError("--cutoffs: expected 3 values for the trilinear model");
    tw_block_audit a;
    check(tw_model_audit_blocks(m->model.get(), cutoffs.data(), limit, &a));
    summary["block_audit"] = {{"dimension", a.dimension},
                              {"blocks", a.blocks},
                              {"cross_block_entries", a.cross_block_entries},
                              {"max_abs_deviation", a.max_abs_deviation}};
  }
  report["summary"] = summary;
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-wave mixing: block spectra, dynamics and conserved quantities", "triwave"};
  app.set_version_flag("--version", std::string(tw_version()));
  app.set_config("--config", "", "Flat key = value file using the long flag names; flags override it");
  app.require_subcommand(1);

  Options o;
  app.add_option("--model", o.model, "trilinear or microscopic")
      ->check(CLI::IsMember({"trilinear", "microscopic"}))
      ->capture_default_str();
  app.add_option("--omega-a", o.omega_a, "Mode a frequency");
  app.add_option("--omega-b", o.omega_b, "Mode b frequency");
  app.add_option("--omega-c", o.omega_c, "Mode c frequency");
  app.add_option("--kappa", o.kappa, "Trilinear coupling magnitude (sign allowed)");
  app.add_option("--kappa-phase", o.kappa_phase, "Phase of the coupling in radians");
  app.add_option("--e0", o.e0, "Atomic level energy E0")->capture_default_str();
  app.add_option("--e1", o.e1, "Atomic level energy E1");
  app.add_option("--e2", o.e2, "Atomic level energy E2");
  app.add_option("--g", o.g, "Common value for g-a, g-b, g-c");
  app.add_option("--g-a", o.g_a, "Coupling of mode a (levels 0-2)");
  app.add_option("--g-b", o.g_b, "Coupling of mode b (levels 0-1)");
  app.add_option("--g-c", o.g_c, "Coupling of mode c (levels 1-2)");
  app.add_option("--block", o.block, "Block labels m1,m2");
  app.add_option("--n-max", o.n_max, "Largest N of a trilinear scan")->check(CLI::PositiveNumber);
  app.add_option("--q-max", o.q_max, "Largest Q of a microscopic scan")->check(CLI::PositiveNumber);
  app.add_option("--initial", o.initial, "fock or coherent")
      ->check(CLI::IsMember({"fock", "coherent"}))
      ->capture_default_str();
  app.add_option("--occupation", o.occupation, "Photon numbers n_a,n_b,n_c");
  app.add_option("--atom", o.atom, "Atomic level of a Fock state")->check(CLI::Range(0, 2));
  app.add_option("--alpha", o.alpha, "Coherent amplitude of mode a: re[,im]");
  app.add_option("--beta", o.beta, "Coherent amplitude of mode b: re[,im]");
  app.add_option("--gamma", o.gamma, "Coherent amplitude of mode c: re[,im]");
  app.add_option("--t-start", o.t_start, "First time point");
  app.add_option("--t-end", o.t_end, "Last time point");
  app.add_option("--steps", o.steps, "Number of grid intervals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tail-epsilon", o.tail_epsilon, "Discarded probability of a coherent state")
      ->check(CLI::Validator(
          [](std::string& s) {
            const double v = std::strtod(s.c_str(), nullptr);
            return v > 0.0 && v < 1.0 ? std::string() : std::string("must lie in (0, 1)");
          },
          "(0,1)"))
      ->capture_default_str();
  app.add_option("--r-start", o.r_start, "First amplitude of the coherent-energy grid")
      ->capture_default_str();
  app.add_option("--r-end", o.r_end, "Last amplitude of the coherent-energy grid")
      ->capture_default_str();
  app.add_option("--tol", o.tol, "Eigensolver tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--interaction", o.interaction, "Operator expression, e.g. \"a' b c + hc\"");
  app.add_option("--modes", o.modes, "Mode order, e.g. a,b,c");
  app.add_option("--cutoffs", o.cutoffs, "Per-mode photon cutoffs, or one value for all");
  app.add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", o.output, "Write to this file instead of standard output");

  struct Command {
    const char* name;
    const char* help;
    Json (*run)(const Options&);
  };
  const Command commands[] = {
      {"spectrum", "Eigenvalues and eigenvectors of one block", run_spectrum},
      {"scan-ground", "Lowest eigenvalue of the diagonal blocks", run_scan_ground},
      {"evolve", "Exact time evolution and observables", run_evolve},
      {"compare-effective", "Three-level model against its reduced trilinear model",
       run_compare_effective},
      {"coherent-energy", "Closed-form coherent-state energies over an amplitude grid",
       run_coherent_energy},
      {"invariants", "Conserved photon-number combinations of an interaction", run_invariants},
      {"audit", "Sparse assembly and commutator checks", run_audit},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    for (const auto& c : commands) {
      if (app.got_subcommand(c.name)) write_report(o, c.run(o));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status == TW_ERR_NUMERICAL || e.status == TW_ERR_INTERNAL ? kExitNumerical
                                                                        : kExitInvalid;
  }
  return 0;
}
