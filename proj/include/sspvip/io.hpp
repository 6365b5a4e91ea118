#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sspvip/analysis.hpp"
#include "sspvip/generator.hpp"
#include "sspvip/oracle.hpp"
#include "sspvip/problems.hpp"
#include "sspvip/solvers.hpp"

// JSON interchange ("sspvip-v1" problem documents, result/report envelopes,
// generator specs) and the CSV trace format. Doubles go through the JSON
// library's shortest-round-trip formatting, so write -> read reproduces every
// matrix bit for bit; the CSV uses %.17g for the same reason.

namespace sspvip {

using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const char* kProblemVersion = "sspvip-v1";

namespace io_detail {

inline const json& field(const json& j, const char* name, const char* ctx) {
  auto it = j.find(name);
  if (it == j.end())
    throw IoError(std::string(ctx) + ": missing field '" + name + "'");
  return *it;
}

inline Vec vec_from_json(const json& j, const char* ctx) {
  if (!j.is_array()) throw IoError(std::string(ctx) + ": expected an array");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw IoError(std::string(ctx) + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

}  // namespace io_detail

inline json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

inline Matrix matrix_from_json(const json& j, const char* ctx = "matrix") {
  using io_detail::field;
  const std::size_t rows = field(j, "rows", ctx).get<std::size_t>();
  const std::size_t cols = field(j, "cols", ctx).get<std::size_t>();
  Vec data = io_detail::vec_from_json(field(j, "data", ctx), ctx);
  if (data.size() != rows * cols)
    throw IoError(std::string(ctx) + ": data length does not match rows*cols");
  return Matrix(rows, cols, std::move(data));
}

inline json set_to_json(const ConvexSet& s) {
  if (const auto* w = std::get_if<WholeSpace>(&s))
    return json{{"kind", "whole"}, {"dim", w->dim}};
  if (const auto* b = std::get_if<Box>(&s))
    return json{{"kind", "box"}, {"lower", b->lower}, {"upper", b->upper}};
  if (const auto* bl = std::get_if<Ball>(&s))
    return json{{"kind", "ball"}, {"center", bl->center}, {"radius", bl->radius}};
  if (const auto* h = std::get_if<Halfspace>(&s))
    return json{{"kind", "halfspace"}, {"normal", h->normal}, {"offset", h->offset}};
  if (const auto* hp = std::get_if<Hyperplane>(&s))
    return json{{"kind", "hyperplane"}, {"normal", hp->normal}, {"offset", hp->offset}};
  const auto& a = std::get<AffineSubspace>(s);
  return json{{"kind", "affine"}, {"basis", matrix_to_json(a.basis)}, {"anchor", a.anchor}};
}

inline ConvexSet set_from_json(const json& j, const char* ctx = "set") {
  using io_detail::field;
  using io_detail::vec_from_json;
  const std::string kind = field(j, "kind", ctx).get<std::string>();
  if (kind == "whole") return WholeSpace{field(j, "dim", ctx).get<std::size_t>()};
  if (kind == "box")
    return make_box(vec_from_json(field(j, "lower", ctx), ctx),
                    vec_from_json(field(j, "upper", ctx), ctx));
  if (kind == "ball")
    return make_ball(vec_from_json(field(j, "center", ctx), ctx),
                     field(j, "radius", ctx).get<double>());
  if (kind == "halfspace")
    return make_halfspace(vec_from_json(field(j, "normal", ctx), ctx),
                          field(j, "offset", ctx).get<double>());
  if (kind == "hyperplane")
    return make_hyperplane(vec_from_json(field(j, "normal", ctx), ctx),
                           field(j, "offset", ctx).get<double>());
  if (kind == "affine")
    return make_affine_subspace(matrix_from_json(field(j, "basis", ctx), ctx),
                                vec_from_json(field(j, "anchor", ctx), ctx));
  throw IoError(std::string(ctx) + ": unknown set kind '" + kind + "'");
}

inline json moduli_to_json(const Moduli& m) {
  return json{{"strong", m.strong_monotonicity},
              {"lip_first", m.lip_first},
              {"lip_second", m.lip_second},
              {"monotone_arg", m.monotone_arg == MonotoneArg::First ? "first" : "second"}};
}

inline Moduli moduli_from_json(const json& j, const char* ctx = "moduli") {
  using io_detail::field;
  Moduli m;
  m.strong_monotonicity = field(j, "strong", ctx).get<double>();
  m.lip_first = field(j, "lip_first", ctx).get<double>();
  m.lip_second = field(j, "lip_second", ctx).get<double>();
  const std::string arg = field(j, "monotone_arg", ctx).get<std::string>();
  if (arg == "first")
    m.monotone_arg = MonotoneArg::First;
  else if (arg == "second")
    m.monotone_arg = MonotoneArg::Second;
  else
    throw IoError(std::string(ctx) + ": monotone_arg must be 'first' or 'second'");
  return m;
}

inline json bifunction_to_json(const Bifunction& h) {
  const auto* a = std::get_if<AffineBifunction>(&h.impl);
  if (!a) throw IoError("bifunction_to_json: only affine bifunctions are serializable");
  return json{{"first_coeff", matrix_to_json(a->first_coeff)},
              {"second_coeff", matrix_to_json(a->second_coeff)},
              {"constant", a->constant},
              {"moduli", moduli_to_json(h.declared)}};
}

inline Bifunction bifunction_from_json(const json& j, const char* ctx = "bifunction") {
  using io_detail::field;
  return make_affine(matrix_from_json(field(j, "first_coeff", ctx), ctx),
                     matrix_from_json(field(j, "second_coeff", ctx), ctx),
                     io_detail::vec_from_json(field(j, "constant", ctx), ctx),
                     moduli_from_json(field(j, "moduli", ctx), ctx));
}

inline json problem_to_json(const SspvipProblem& p) {
  json j{{"version", kProblemVersion},
         {"dims", {p.dims.x, p.dims.y, p.dims.u, p.dims.v}},
         {"sets",
          {{"C1", set_to_json(p.set_x)},
           {"C2", set_to_json(p.set_y)},
           {"C3", set_to_json(p.set_u)},
           {"C4", set_to_json(p.set_v)}}},
         {"bifunctions",
          {{"F", bifunction_to_json(p.vi_first)},
           {"G", bifunction_to_json(p.vi_second)},
           {"f", bifunction_to_json(p.image_first)},
           {"g", bifunction_to_json(p.image_second)}}},
         {"operators", {{"A", matrix_to_json(p.op_a)}, {"B", matrix_to_json(p.op_b)}}}};
  if (p.planted) j["planted_solution"] = json{{"x", p.planted->x}, {"y", p.planted->y}};
  return j;
}

inline SspvipProblem problem_from_json(const json& j) {
  using io_detail::field;
  const char* ctx = "problem";
  const std::string version = field(j, "version", ctx).get<std::string>();
  if (version != kProblemVersion)
    throw IoError("problem: unsupported version '" + version + "' (expected " +
                  kProblemVersion + ")");
  const json& dims = field(j, "dims", ctx);
  if (!dims.is_array() || dims.size() != 4)
    throw IoError("problem: dims must be an array of four sizes");
  SspvipProblem p;
  p.dims = Dims{dims[0].get<std::size_t>(), dims[1].get<std::size_t>(),
                dims[2].get<std::size_t>(), dims[3].get<std::size_t>()};
  const json& sets = field(j, "sets", ctx);
  p.set_x = set_from_json(field(sets, "C1", "sets"), "C1");
  p.set_y = set_from_json(field(sets, "C2", "sets"), "C2");
  p.set_u = set_from_json(field(sets, "C3", "sets"), "C3");
  p.set_v = set_from_json(field(sets, "C4", "sets"), "C4");
  const json& bifns = field(j, "bifunctions", ctx);
  p.vi_first = bifunction_from_json(field(bifns, "F", "bifunctions"), "F");
  p.vi_second = bifunction_from_json(field(bifns, "G", "bifunctions"), "G");
  p.image_first = bifunction_from_json(field(bifns, "f", "bifunctions"), "f");
  p.image_second = bifunction_from_json(field(bifns, "g", "bifunctions"), "g");
  const json& ops = field(j, "operators", ctx);
  p.op_a = matrix_from_json(field(ops, "A", "operators"), "A");
  p.op_b = matrix_from_json(field(ops, "B", "operators"), "B");
  if (j.contains("planted_solution")) {
    const json& pl = j["planted_solution"];
    p.planted = Candidate{io_detail::vec_from_json(field(pl, "x", "planted_solution"), "x"),
                          io_detail::vec_from_json(field(pl, "y", "planted_solution"), "y")};
  }
  return p;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

inline SspvipProblem read_problem(const std::string& path) {
  return problem_from_json(read_json_file(path));
}

inline void write_problem(const std::string& path, const SspvipProblem& p) {
  write_json_file(path, problem_to_json(p));
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "n,r1,r2,r3,r4,err_star,alpha_n\n";
  for (const TraceRow& r : trace)
    out << r.n << ',' << format_double(r.r1) << ',' << format_double(r.r2) << ','
        << format_double(r.r3) << ',' << format_double(r.r4) << ','
        << format_double(r.err_star) << ',' << format_double(r.alpha) << '\n';
  return out.str();
}

inline void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << trace_to_csv(trace);
  if (!out) throw IoError("write failed: " + path);
}

inline std::string schedule_to_string(const AlphaSchedule& s) {
  if (const auto* c = std::get_if<ConstantSchedule>(&s))
    return "const:" + format_double(c->value);
  if (const auto* h = std::get_if<HarmonicSchedule>(&s))
    return "harmonic:" + format_double(h->offset);
  const auto& cu = std::get<CustomSchedule>(s);
  std::string out = "custom:";
  for (std::size_t i = 0; i < cu.values.size(); ++i)
    out += (i ? "," : "") + format_double(cu.values[i]);
  return out;
}

inline AlphaSchedule parse_schedule(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (head == "const") return make_constant_schedule(std::stod(tail));
    if (head == "harmonic") return make_harmonic_schedule(std::stod(tail));
    if (head == "custom") {
      std::vector<double> values;
      std::istringstream in(tail);
      std::string item;
      while (std::getline(in, item, ',')) values.push_back(std::stod(item));
      return make_custom_schedule(std::move(values));
    }
  } catch (const ScheduleError&) {
    throw;
  } catch (const std::exception&) {
    throw IoError("schedule '" + s + "': value does not parse; accepted forms are "
                  "const:<a> with a in (0,1), harmonic:<offset> with offset > 1, and "
                  "custom:<a0,a1,...> with each value in (0,1)");
  }
  throw IoError("unknown schedule '" + s + "'; accepted forms are const:<a> with a in "
                "(0,1), harmonic:<offset> with offset > 1, and custom:<a0,a1,...> with "
                "each value in (0,1)");
}

inline json residual_report_to_json(const ResidualReport& r) {
  return json{{"r1", r.r1},
              {"r2", r.r2},
              {"r3", r.r3},
              {"r4", r.r4},
              {"max", r.max_residual()},
              {"feasible",
               {{"x", r.feas_x}, {"y", r.feas_y}, {"u", r.feas_u}, {"v", r.feas_v}}}};
}

inline json result_to_json(const SolveResult& res, const SolverParams& params,
                           const ResidualReport& final_residuals) {
  return json{{"version", "sspvip-result-v1"},
              {"converged", res.converged},
              {"iterations", res.iterations},
              {"final", {{"x", res.final.x}, {"y", res.final.y}}},
              {"final_residuals", residual_report_to_json(final_residuals)},
              {"schedule_warning", res.schedule_warning},
              {"trace_rows", res.trace.size()},
              {"params",
               {{"rho", params.rho},
                {"lambda", params.lambda},
                {"gamma", params.gamma},
                {"alpha_schedule", schedule_to_string(params.alpha_schedule)},
                {"max_iters", params.max_iters},
                {"tol", params.tol},
                {"trace_every", params.trace_every}}}};
}

namespace io_detail {

inline json opt_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

inline json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace io_detail

inline json index_constants_to_json(const IndexConstants& c) {
  return json{{"theta_image", c.theta_image},
              {"delta", c.delta},
              {"p", c.p},
              {"q", c.q},
              {"center", io_detail::opt_to_json(c.center)},
              {"radius", io_detail::opt_to_json(c.radius)},
              {"alpha_ok", c.alpha_ok},
              {"beta_ok", c.beta_ok},
              {"q_ok", c.q_ok}};
}

inline json report_to_json(const CertificationReport& rep) {
  json j{{"version", "sspvip-report-v1"},
         {"lambda", rep.lambda},
         {"index1", index_constants_to_json(rep.index1)},
         {"index2", index_constants_to_json(rep.index2)},
         {"norm_a", rep.norm_a},
         {"norm_b", rep.norm_b},
         {"gamma_interval",
          {{"lo", rep.gamma_interval.lo},
           {"hi", io_detail::finite_or_null(rep.gamma_interval.hi)}}},
         {"rho", io_detail::opt_to_json(rep.rho)},
         {"gamma", io_detail::opt_to_json(rep.gamma)},
         {"theta", io_detail::opt_to_json(rep.theta)},
         {"certified", rep.certified},
         {"delta1_tight", io_detail::opt_to_json(rep.delta1_tight)},
         {"delta2_tight", io_detail::opt_to_json(rep.delta2_tight)},
         {"notes", rep.notes}};
  if (rep.rho_interval)
    j["rho_interval"] = json{{"lo", rep.rho_interval->lo}, {"hi", rep.rho_interval->hi}};
  else
    j["rho_interval"] = nullptr;
  return j;
}

inline json problem_moduli_to_json(const ProblemModuli& m) {
  return json{{"vi_first", moduli_to_json(m.vi_first)},
              {"vi_second", moduli_to_json(m.vi_second)},
              {"image_first", moduli_to_json(m.image_first)},
              {"image_second", moduli_to_json(m.image_second)},
              {"norm_a", m.norm_a},
              {"norm_b", m.norm_b}};
}

inline ProblemModuli problem_moduli_from_json(const json& j) {
  using io_detail::field;
  const char* ctx = "moduli set";
  ProblemModuli m;
  m.vi_first = moduli_from_json(field(j, "vi_first", ctx), "vi_first");
  m.vi_second = moduli_from_json(field(j, "vi_second", ctx), "vi_second");
  m.image_first = moduli_from_json(field(j, "image_first", ctx), "image_first");
  m.image_second = moduli_from_json(field(j, "image_second", ctx), "image_second");
  m.norm_a = field(j, "norm_a", ctx).get<double>();
  m.norm_b = field(j, "norm_b", ctx).get<double>();
  return m;
}

inline json genspec_to_json(const GeneratorSpec& s, std::uint64_t seed) {
  return json{{"version", "sspvip-genspec-v1"},
              {"seed", seed},
              {"dims", {s.dims.x, s.dims.y, s.dims.u, s.dims.v}},
              {"set_kinds",
               {set_kind_name(s.kind_x), set_kind_name(s.kind_y), set_kind_name(s.kind_u),
                set_kind_name(s.kind_v)}},
              {"ratio", {s.ratio_lo, s.ratio_hi}},
              {"coupling", {s.coupling_lo, s.coupling_hi}},
              {"scale", {s.scale_lo, s.scale_hi}},
              {"opnorm", {s.opnorm_lo, s.opnorm_hi}}};
}

inline GeneratorSpec genspec_from_json(const json& j, std::uint64_t* seed_out = nullptr) {
  using io_detail::field;
  const char* ctx = "generator spec";
  GeneratorSpec s;
  const json& dims = field(j, "dims", ctx);
  if (!dims.is_array() || dims.size() != 4)
    throw IoError("generator spec: dims must be an array of four sizes");
  s.dims = Dims{dims[0].get<std::size_t>(), dims[1].get<std::size_t>(),
                dims[2].get<std::size_t>(), dims[3].get<std::size_t>()};
  if (j.contains("set_kinds")) {
    const json& kinds = j["set_kinds"];
    if (!kinds.is_array() || kinds.size() != 4)
      throw IoError("generator spec: set_kinds must list four kinds");
    s.kind_x = set_kind_from_name(kinds[0].get<std::string>());
    s.kind_y = set_kind_from_name(kinds[1].get<std::string>());
    s.kind_u = set_kind_from_name(kinds[2].get<std::string>());
    s.kind_v = set_kind_from_name(kinds[3].get<std::string>());
  }
  auto range = [&](const char* name, double& lo, double& hi) {
    if (!j.contains(name)) return;
    const json& r = j[name];
    if (!r.is_array() || r.size() != 2)
      throw IoError(std::string("generator spec: ") + name + " must be [lo, hi]");
    lo = r[0].get<double>();
    hi = r[1].get<double>();
  };
  range("ratio", s.ratio_lo, s.ratio_hi);
  range("coupling", s.coupling_lo, s.coupling_hi);
  range("scale", s.scale_lo, s.scale_hi);
  range("opnorm", s.opnorm_lo, s.opnorm_hi);
  if (seed_out && j.contains("seed")) *seed_out = j["seed"].get<std::uint64_t>();
  return s;
}

}  // namespace sspvip
