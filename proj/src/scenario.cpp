#include "reslab/scenario.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "reslab/errors.hpp"
#include "reslab/heat.hpp"
#include "reslab/suites.hpp"
#include "reslab/zeta.hpp"

namespace reslab {

using nlohmann::json;

namespace {

Rational parse_rational(const json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(Integer(s));
      return Rational(Integer(s.substr(0, slash)),
                      Integer(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ParseError(what + ": cannot parse rational '" + s + "'");
    }
  }
  throw ParseError(what + ": rationals are integers or 'p/q' strings");
}

FourierPoly parse_branch(const json& rows, const std::string& what) {
  FourierPoly p;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 5)
      throw ParseError(what +
                       ": branch rows are [freq, re_num, re_den, im_num, "
                       "im_den]");
    long freq = row[0].get<long>();
    Rational re(row[1].get<long long>(), row[2].get<long long>());
    Rational im(row[3].get<long long>(), row[4].get<long long>());
    p.add_coeff(freq, CRational(re, im));
  }
  return p;
}

ClassicalSymbol parse_symbol_terms(const json& terms, int rank,
                                   const std::string& what) {
  ClassicalSymbol s(rank);
  for (const auto& term : terms) {
    if (!term.contains("degree"))
      throw ParseError(what + ": symbol term without degree");
    int d = term["degree"].get<int>();
    FpMatrix plus(rank), minus(rank);
    if (term.contains("entries")) {
      for (const auto& ent : term["entries"]) {
        int i = ent.at("row").get<int>();
        int j = ent.at("col").get<int>();
        if (i < 0 || i >= rank || j < 0 || j >= rank)
          throw ParseError(what + ": entry index outside rank");
        if (ent.contains("plus")) plus.at(i, j) = parse_branch(ent["plus"], what);
        if (ent.contains("minus"))
          minus.at(i, j) = parse_branch(ent["minus"], what);
      }
    } else {
      if (rank != 1)
        throw ParseError(what + ": rank > 1 symbols need entry lists");
      if (term.contains("plus")) plus.at(0, 0) = parse_branch(term["plus"], what);
      if (term.contains("minus"))
        minus.at(0, 0) = parse_branch(term["minus"], what);
    }
    s.set_term(HomTerm(d, std::move(plus), std::move(minus)));
  }
  return s;
}

json branch_to_json(const FourierPoly& p) {
  json rows = json::array();
  for (const auto& [freq, c] : p.coeffs()) {
    rows.push_back({freq, static_cast<long long>(numerator(c.re)),
                    static_cast<long long>(denominator(c.re)),
                    static_cast<long long>(numerator(c.im)),
                    static_cast<long long>(denominator(c.im))});
  }
  return rows;
}

json symbol_to_json(const ClassicalSymbol& s) {
  json terms = json::array();
  for (const auto& [d, t] : s.terms()) {
    json term;
    term["degree"] = d;
    if (s.rank() == 1) {
      term["plus"] = branch_to_json(t.plus.at(0, 0));
      term["minus"] = branch_to_json(t.minus.at(0, 0));
    } else {
      json entries = json::array();
      for (int i = 0; i < s.rank(); ++i)
        for (int j = 0; j < s.rank(); ++j) {
          if (t.plus.at(i, j).is_zero() && t.minus.at(i, j).is_zero())
            continue;
          json ent;
          ent["row"] = i;
          ent["col"] = j;
          ent["plus"] = branch_to_json(t.plus.at(i, j));
          ent["minus"] = branch_to_json(t.minus.at(i, j));
          entries.push_back(ent);
        }
      term["entries"] = entries;
    }
    terms.push_back(term);
  }
  return terms;
}

CoefficientConvention parse_convention(const json& task) {
  if (!task.contains("convention")) return CoefficientConvention::kExact;
  std::string c = task["convention"].get<std::string>();
  if (c == "exact") return CoefficientConvention::kExact;
  if (c == "paper") return CoefficientConvention::kPaper;
  throw ParseError("unknown convention '" + c + "'");
}

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{
      "wodzicki_residue",  "mellin_residue",    "correction_sum",
      "weighted_cochain",  "coboundary_anomaly", "family_derivative",
      "interpolation_difference",               "simplex_constant",
      "heat_trace",        "jlo_value",          "zeta_trace_germ",
      "weighted_trace",    "duhamel_check",      "b_jlo_check",
      "basicformula_check", "criterion"};
  return kinds;
}

}  // namespace

Scenario parse_scenario_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  Scenario s;
  try {
    if (root.contains("testbed")) {
      const auto& tb = root["testbed"];
      if (tb.contains("dim")) s.dim = tb["dim"].get<int>();
      if (tb.contains("rank")) s.rank = tb["rank"].get<int>();
    }
    if (s.dim != 1) throw ParseError("testbed: only dim = 1 is supported");
    if (s.rank < 1) throw ParseError("testbed: rank must be >= 1");

    if (root.contains("operators"))
      for (const auto& [name, body] : root["operators"].items()) {
        const json& terms = body.is_array() ? body : body.at("terms");
        s.operators.emplace(
            name, parse_symbol_terms(terms, s.rank, "operator " + name));
      }

    if (root.contains("weights"))
      for (const auto& [name, body] : root["weights"].items()) {
        std::optional<EigenvalueLaw> law;
        if (body.contains("eigenvalue_law")) {
          EigenvalueLaw l;
          for (const auto& v : body["eigenvalue_law"])
            l.p.push_back(parse_rational(v, "weight " + name));
          law = std::move(l);
        }
        int order = body.contains("order")
                        ? body["order"].get<int>()
                        : (law ? law->order() : 0);
        ClassicalSymbol sym =
            body.contains("symbol")
                ? parse_symbol_terms(body["symbol"], s.rank,
                                     "weight " + name)
                : (law ? law->to_symbol(s.rank)
                       : throw ParseError("weight " + name +
                                          ": needs symbol or law"));
        s.weights.emplace(name,
                          Weight::from_symbol(std::move(sym), order, law));
      }

    if (root.contains("tasks"))
      for (const auto& jt : root["tasks"]) {
        Task t;
        t.kind = jt.at("kind").get<std::string>();
        bool known = false;
        for (const auto& k : known_kinds()) known |= (k == t.kind);
        if (!known) throw ParseError("unknown task kind '" + t.kind + "'");
        if (jt.contains("label")) t.label = jt["label"].get<std::string>();
        if (jt.contains("weight")) t.weight = jt["weight"].get<std::string>();
        if (jt.contains("args"))
          for (const auto& a : jt["args"]) t.args.push_back(a.get<std::string>());
        if (jt.contains("direction"))
          t.direction = jt["direction"].get<std::string>();
        t.conv = parse_convention(jt);
        if (jt.contains("t")) {
          if (jt["t"].is_string())
            t.t_rational = jt["t"].get<std::string>();
          else {
            t.t = jt["t"].get<double>();
            std::ostringstream os;
            os << jt["t"];
            t.t_rational = os.str();
          }
        }
        if (jt.contains("u")) t.u = jt["u"].get<double>();
        if (jt.contains("t_grid"))
          for (const auto& v : jt["t_grid"]) t.t_grid.push_back(v.get<double>());
        if (jt.contains("depth")) t.depth = jt["depth"].get<int>();
        if (jt.contains("nodes")) t.nodes = jt["nodes"].get<int>();
        if (jt.contains("radius")) t.radius = jt["radius"].get<long>();
        if (jt.contains("quad_nodes"))
          t.quad_nodes = jt["quad_nodes"].get<int>();
        if (jt.contains("id")) t.criterion_id = jt["id"].get<std::string>();
        if (jt.contains("k"))
          for (const auto& v : jt["k"])
            t.args.push_back(std::to_string(v.get<int>()));
        if (jt.contains("expected")) {
          const auto& e = jt["expected"];
          if (e.is_number()) {
            t.expected_re = e.get<double>();
            t.expected_im = 0.0;
          } else {
            if (e.contains("re")) t.expected_re = e["re"].get<double>();
            if (e.contains("im")) t.expected_im = e["im"].get<double>();
          }
        }
        if (jt.contains("tolerance")) t.tolerance = jt["tolerance"].get<double>();
        s.tasks.push_back(std::move(t));
      }
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario structure: ") + e.what());
  }

  // Name resolution happens up front: every task argument must exist.
  for (const auto& t : s.tasks) {
    if (t.kind == "criterion" || t.kind == "simplex_constant") continue;
    if (!t.weight.empty() && !s.weights.count(t.weight))
      throw ResolutionError("task references unknown weight '" + t.weight +
                            "'");
    for (const auto& a : t.args)
      if (!s.operators.count(a))
        throw ResolutionError("task references unknown operator '" + a + "'");
    if (!t.direction.empty() && !s.operators.count(t.direction))
      throw ResolutionError("task references unknown direction '" +
                            t.direction + "'");
  }
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json root;
  root["testbed"] = {{"dim", s.dim}, {"rank", s.rank}};
  json ops = json::object();
  for (const auto& [name, sym] : s.operators) ops[name] = symbol_to_json(sym);
  root["operators"] = ops;
  json ws = json::object();
  for (const auto& [name, w] : s.weights) {
    json body;
    body["order"] = w.q;
    if (w.law) {
      json law = json::array();
      for (const auto& p : w.law->p) law.push_back(p.str());
      body["eigenvalue_law"] = law;
    }
    body["symbol"] = symbol_to_json(w.symbol);
    ws[name] = body;
  }
  root["weights"] = ws;
  json tasks = json::array();
  for (const auto& t : s.tasks) {
    json jt;
    jt["kind"] = t.kind;
    if (!t.label.empty()) jt["label"] = t.label;
    if (!t.weight.empty()) jt["weight"] = t.weight;
    if (!t.args.empty()) jt["args"] = t.args;
    if (!t.direction.empty()) jt["direction"] = t.direction;
    jt["convention"] = convention_name(t.conv);
    jt["t"] = t.t_rational;
    jt["u"] = t.u;
    if (!t.t_grid.empty()) jt["t_grid"] = t.t_grid;
    jt["depth"] = t.depth;
    jt["nodes"] = t.nodes;
    jt["radius"] = t.radius;
    jt["quad_nodes"] = t.quad_nodes;
    if (!t.criterion_id.empty()) jt["id"] = t.criterion_id;
    if (t.expected_re) {
      json e;
      e["re"] = *t.expected_re;
      e["im"] = t.expected_im.value_or(0.0);
      jt["expected"] = e;
    }
    if (t.tolerance) jt["tolerance"] = *t.tolerance;
    tasks.push_back(jt);
  }
  root["tasks"] = tasks;
  return root.dump(2);
}

int default_thread_count() {
  if (const char* env = std::getenv("RES_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1 && v <= 256) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

TraceProvider oracle_trace_provider(const Weight& q, long radius) {
  if (!q.law)
    throw NotElliptic(
        "oracle trace provider needs a diagonal spectral model on the "
        "weight");
  EigenvalueLaw law = *q.law;
  return [law, radius](std::span<const ClassicalSymbol> factors)
             -> std::pair<std::complex<double>, double> {
    if (factors.empty()) throw Error("trace provider: empty factor list");
    SpectralOperator acc = quantize(factors[0], radius);
    for (size_t i = 1; i < factors.size(); ++i)
      acc = multiply(acc, quantize(factors[i], radius));
    ValueErr v = weighted_trace(law, acc);
    return {v.value, v.err};
  };
}

namespace {

double parse_t_double(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

Rational parse_t_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (s.find('.') != std::string::npos)
      throw ParseError("family parameter t must be rational ('p/q'), got '" +
                       s + "'");
    return Rational(Integer(s));
  }
  return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

void execute_task(const Scenario& s, const Task& t, const RunOptions& opts,
                  TaskResult& out) {
  auto op = [&](const std::string& name) -> const ClassicalSymbol& {
    auto it = s.operators.find(name);
    if (it == s.operators.end())
      throw ResolutionError("unknown operator '" + name + "'");
    return it->second;
  };
  auto weight = [&]() -> const Weight& {
    auto it = s.weights.find(t.weight);
    if (it == s.weights.end())
      throw ResolutionError("unknown weight '" + t.weight + "'");
    return it->second;
  };
  auto symbols = [&]() {
    std::vector<ClassicalSymbol> ops;
    for (const auto& a : t.args) ops.push_back(op(a));
    return ops;
  };
  auto law_of = [&](const Weight& w) -> const EigenvalueLaw& {
    if (!w.law)
      throw NotElliptic("task '" + t.kind +
                        "' needs a weight with a diagonal spectral model");
    return *w.law;
  };
  auto quantized = [&](long radius) {
    std::vector<SpectralOperator> mats;
    for (const auto& a : t.args) mats.push_back(quantize(op(a), radius));
    return mats;
  };
  TermTable table;
  TermTable* tptr = opts.with_terms ? &table : nullptr;

  if (t.kind == "wodzicki_residue") {
    if (t.args.size() != 1)
      throw ParseError("wodzicki_residue takes one operator");
    CRational r = wodzicki_residue(op(t.args[0]));
    out.value = r.to_complex();
    out.exact = to_string(r);
  } else if (t.kind == "mellin_residue") {
    auto ops = symbols();
    CRational r = mellin_residue(weight(), ops);
    out.value = r.to_complex();
    out.exact = to_string(r);
  } else if (t.kind == "correction_sum") {
    auto ops = symbols();
    CRational r = correction_sum(weight(), ops, t.conv, tptr);
    out.value = r.to_complex();
    out.exact = to_string(r);
  } else if (t.kind == "coboundary_anomaly") {
    auto ops = symbols();
    CRational r = coboundary_anomaly(weight(), ops, t.conv, tptr);
    out.value = r.to_complex();
    out.exact = to_string(r);
  } else if (t.kind == "weighted_cochain") {
    auto ops = symbols();
    CochainValue v = weighted_cochain(weight(), ops,
                                      oracle_trace_provider(weight()), t.conv);
    out.value = v.value;
    out.err = v.err;
  } else if (t.kind == "family_derivative" ||
             t.kind == "interpolation_difference") {
    const Weight& base = weight();
    const ClassicalSymbol& dir = op(t.direction);
    std::optional<EigenvalueLaw> dir_law;
    // Multiplier directions keep the diagonal model available.
    EigenvalueLaw candidate;
    bool diagonal = true;
    candidate.p.assign(base.q + 1, Rational(0));
    for (const auto& [d, term] : dir.terms()) {
      if (d < 0 || d > base.q || term.support_bound() != 0) {
        diagonal = false;
        break;
      }
      CRational c = term.plus.at(0, 0).coeff(0);
      if (!c.is_real() || !(term.plus == term.minus)) {
        diagonal = false;
        break;
      }
      candidate.p[d] = c.re;
    }
    if (diagonal && dir.rank() == 1 && !dir.is_zero()) dir_law = candidate;
    FamilySpec f = FamilySpec::make(base, dir, dir_law);
    auto ops = symbols();
    if (t.kind == "family_derivative") {
      CRational r =
          family_derivative(f, parse_t_rational(t.t_rational), ops, t.conv,
                            tptr);
      out.value = r.to_complex();
      out.exact = to_string(r);
    } else {
      CochainValue v = interpolation_difference(f, ops, t.nodes, t.conv);
      out.value = v.value;
      out.err = v.err;
      if (v.exact_part) out.exact = to_string(*v.exact_part);
    }
  } else if (t.kind == "simplex_constant") {
    std::vector<int> k;
    for (const auto& a : t.args) k.push_back(std::stoi(a));
    SimplexConstant c = simplex_constant(MultiIndex{k});
    out.value = std::complex<double>(to_double(c.value_exact), 0.0);
    out.exact = c.value_exact.str();
    out.detail = "paper=" + c.value_paper.str();
  } else if (t.kind == "heat_trace") {
    if (t.args.size() != 1) throw ParseError("heat_trace takes one operator");
    ValueErr v = heat_trace(law_of(weight()),
                            quantize(op(t.args[0]), t.radius),
                            parse_t_double(t.t_rational));
    out.value = v.value;
    out.err = v.err;
  } else if (t.kind == "jlo_value") {
    auto mats = quantized(t.radius + 8);
    ValueErr v =
        jlo_value(law_of(weight()), mats, parse_t_double(t.t_rational),
                  t.radius);
    out.value = v.value;
    out.err = v.err;
  } else if (t.kind == "zeta_trace_germ" || t.kind == "weighted_trace") {
    auto mats = quantized(40);
    SpectralOperator acc = mats.at(0);
    for (size_t i = 1; i < mats.size(); ++i) acc = multiply(acc, mats[i]);
    ZetaGerm g = zeta_trace_germ(law_of(weight()), acc);
    out.value = g.germ.konst;
    out.err = g.err;
    out.pole = g.germ.pole;
  } else if (t.kind == "duhamel_check") {
    if (t.args.size() != 1)
      throw ParseError("duhamel_check takes one operator");
    double dev = duhamel_check(law_of(weight()),
                               quantize(op(t.args[0]), t.radius), t.u,
                               t.quad_nodes);
    out.value = std::complex<double>(dev, 0.0);
  } else if (t.kind == "b_jlo_check") {
    auto mats = quantized(2 * t.radius);
    BJloReport rep = b_jlo_check(law_of(weight()), mats,
                                 parse_t_double(t.t_rational), t.radius);
    out.value = std::complex<double>(rep.deviation, 0.0);
    std::ostringstream os;
    os << "lhs=" << rep.lhs.value.real() << " rhs=" << rep.rhs.value.real();
    out.detail = os.str();
  } else if (t.kind == "basicformula_check") {
    auto mats = quantized(2 * t.radius);
    std::vector<double> grid = t.t_grid;
    if (grid.empty()) grid = {0.4, 0.2, 0.1, 0.05};
    BasicFormulaReport rep = basicformula_check(
        law_of(weight()), mats, grid, t.depth, t.conv, t.radius);
    out.value = std::complex<double>(rep.slope, 0.0);
    std::ostringstream os;
    os << "residuals:";
    for (const auto& row : rep.rows) os << " (" << row.t << ", " << row.residual << ")";
    out.detail = os.str();
  } else if (t.kind == "criterion") {
    CriterionResult res = run_criterion(t.criterion_id, opts.tol_scale);
    out.value = std::complex<double>(res.pass ? 1.0 : 0.0, 0.0);
    out.detail = res.detail;
    out.pass = res.pass;
    out.deviation = res.max_deviation;
    return;  // pass already decided
  } else {
    throw ParseError("unknown task kind '" + t.kind + "'");
  }

  out.terms = std::move(table);
  if (t.expected_re) {
    std::complex<double> expected(*t.expected_re, t.expected_im.value_or(0.0));
    out.deviation = std::abs(out.value - expected);
    if (t.tolerance)
      out.pass = *out.deviation <= *t.tolerance * opts.tol_scale;
  }
}

json task_inputs_json(const Task& t) {
  json j;
  j["kind"] = t.kind;
  if (!t.weight.empty()) j["weight"] = t.weight;
  if (!t.args.empty()) j["args"] = t.args;
  if (!t.direction.empty()) j["direction"] = t.direction;
  j["convention"] = convention_name(t.conv);
  if (!t.criterion_id.empty()) j["id"] = t.criterion_id;
  return j;
}

}  // namespace

Report run_scenario(const Scenario& s, const RunOptions& opts) {
  Report rep;
  rep.tasks.resize(s.tasks.size());
  const int threads = opts.threads > 0 ? opts.threads : default_thread_count();

  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= s.tasks.size()) break;
      const Task& t = s.tasks[i];
      TaskResult& out = rep.tasks[i];
      out.index = i;
      out.kind = t.kind;
      out.label = t.label;
      out.inputs_json = task_inputs_json(t).dump();
      auto start = std::chrono::steady_clock::now();
      try {
        execute_task(s, t, opts, out);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      out.time_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
  };
  if (threads <= 1 || s.tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& r : rep.tasks) {
    if (r.error)
      ++rep.errors;
    else if (r.pass.has_value())
      *r.pass ? ++rep.passed : ++rep.failed;
  }
  return rep;
}

std::string report_to_json(const Report& r, bool include_timing) {
  json root;
  json tasks = json::array();
  for (const auto& t : r.tasks) {
    json jt;
    jt["index"] = t.index;
    jt["kind"] = t.kind;
    if (!t.label.empty()) jt["label"] = t.label;
    jt["inputs"] = json::parse(t.inputs_json);
    if (t.error) {
      jt["error"] = *t.error;
    } else {
      jt["value"] = {{"re", t.value.real()}, {"im", t.value.imag()}};
      jt["err"] = t.err;
      if (t.exact) jt["exact"] = *t.exact;
      if (t.pole)
        jt["pole"] = {{"re", t.pole->real()}, {"im", t.pole->imag()}};
      if (!t.detail.empty()) jt["detail"] = t.detail;
      if (t.deviation) jt["deviation"] = *t.deviation;
      if (t.pass) jt["pass"] = *t.pass;
      if (!t.terms.empty()) {
        json terms = json::array();
        for (const auto& row : t.terms) {
          json jr;
          jr["k"] = row.k.k;
          if (row.j >= 0) jr["j"] = row.j;
          jr["coeff"] = row.coeff.str();
          jr["residue"] = to_string(row.residue);
          terms.push_back(jr);
        }
        jt["terms"] = terms;
      }
    }
    if (include_timing) jt["time_ms"] = t.time_ms;
    tasks.push_back(jt);
  }
  root["tasks"] = tasks;
  root["summary"] = {{"tasks", r.tasks.size()},
                     {"passed", r.passed},
                     {"failed", r.failed},
                     {"errors", r.errors}};
  return root.dump(2);
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os.precision(15);
  os << "index,kind,label,value_re,value_im,err,exact,deviation,pass,error\n";
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += "\"\"";
      out += c;
    }
    out += '"';
    return out;
  };
  for (const auto& t : r.tasks) {
    os << t.index << ',' << t.kind << ',' << quote(t.label) << ',';
    if (t.error) {
      os << ",,,,,," << quote(*t.error) << '\n';
      continue;
    }
    os << t.value.real() << ',' << t.value.imag() << ',' << t.err << ',';
    os << (t.exact ? quote(*t.exact) : "") << ',';
    if (t.deviation) os << *t.deviation;
    os << ',';
    if (t.pass) os << (*t.pass ? "true" : "false");
    os << ",\n";
  }
  return os.str();
}

}  // namespace reslab
