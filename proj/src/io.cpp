#include "twistfactor/io.hpp"

#include <fstream>
#include <sstream>

namespace twistfactor {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

const Json& member(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) bad(std::string("missing field '") + field + "'");
  return j.at(field);
}

Json counts_to_json(const CountsModN& c) {
  Json j = Json::object();
  j["affine"] = int_to_json(c.affine);
  j["projective"] = int_to_json(c.projective);
  return j;
}

CountsModN counts_from_json(const Json& j, const Int& n) {
  return {n, int_from_json(member(j, "affine"), "affine"),
          int_from_json(member(j, "projective"), "projective")};
}

CountsModN counts_from_traces(const Int& p, const Int& q, const Int& ap, const Int& aq) {
  return {p * q, (p - ap) * (q - aq), (p + 1 - ap) * (q + 1 - aq)};
}

}  // namespace

Json int_to_json(const Int& v) { return to_dec(v); }

Int int_from_json(const Json& j, const char* field) {
  // Small values written by hand may be plain JSON integers.
  if (j.is_number_integer()) return parse_int(j.dump());
  if (!j.is_string()) bad(std::string("field '") + field + "' must be a decimal string");
  try {
    return parse_int(j.get<std::string>());
  } catch (const Error&) {
    bad(std::string("field '") + field + "' is not a decimal integer");
  }
}

Json instance_to_json(const AttackInstance& inst) {
  Json j = Json::object();
  j["n"] = int_to_json(inst.n);
  if (inst.p) j["p"] = int_to_json(*inst.p);
  if (inst.q) j["q"] = int_to_json(*inst.q);
  j["curve"] = {{"a", int_to_json(inst.curve.a)}, {"b", int_to_json(inst.curve.b)}};
  j["d"] = int_to_json(inst.d);
  j["counts"] = counts_to_json(inst.counts);
  if (inst.twist_counts) j["twist_counts"] = counts_to_json(*inst.twist_counts);
  if (inst.traces) {
    j["traces"] = {{"ap", int_to_json(inst.traces->ap)}, {"aq", int_to_json(inst.traces->aq)}};
  }
  j["seed"] = inst.seed;
  return j;
}

AttackInstance instance_from_json(const Json& j) {
  AttackInstance inst;
  inst.n = int_from_json(member(j, "n"), "n");
  const Json& curve = member(j, "curve");
  inst.curve = make_curve(int_from_json(member(curve, "a"), "a"),
                          int_from_json(member(curve, "b"), "b"), inst.n);
  inst.d = int_from_json(member(j, "d"), "d");
  inst.counts = counts_from_json(member(j, "counts"), inst.n);
  if (j.contains("twist_counts")) inst.twist_counts = counts_from_json(j["twist_counts"], inst.n);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("field 'seed' must be a nonnegative integer");
    inst.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("p") != j.contains("q")) bad("p and q must be given together");
  if (j.contains("p")) {
    Int p = int_from_json(j["p"], "p");
    Int q = int_from_json(j["q"], "q");
    if (p * q != inst.n) bad("p * q does not equal n");
    if (p > q) std::swap(p, q);
    inst.p = p;
    inst.q = q;
  }
  if (j.contains("traces")) {
    if (!inst.has_ground_truth()) bad("traces given without p and q");
    const Json& t = j["traces"];
    inst.traces = Traces{int_from_json(member(t, "ap"), "ap"), int_from_json(member(t, "aq"), "aq")};
    const Int &p = *inst.p, &q = *inst.q, &ap = inst.traces->ap, &aq = inst.traces->aq;
    if (counts_from_traces(p, q, ap, aq) != inst.counts) bad("traces do not reproduce counts");
    if (inst.twist_counts) {
      const CountsModN tw = counts_from_traces(p, q, trace_sign_class(inst.d, p) * ap,
                                               trace_sign_class(inst.d, q) * aq);
      if (tw != *inst.twist_counts) bad("traces do not reproduce twist_counts");
    }
  }
  return inst;
}

Json report_to_json(const AttackReport& report, bool deterministic) {
  Json j = Json::object();
  j["outcome"] = report.factored() ? "factored" : "failed";
  if (report.factored()) {
    j["p"] = int_to_json(report.p);
    j["q"] = int_to_json(report.q);
  } else {
    j["reason"] = report.reason;
  }
  j["method"] = report.method;
  j["divisors_tried"] = report.divisors_tried;
  j["coppersmith_calls"] = report.coppersmith_calls;
  if (report.twists_tried) j["twists_tried"] = *report.twists_tried;
  j["wall_ms"] = deterministic ? 0 : report.wall_time.count();
  return j;
}

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (const IntVector& row : m.data()) {
    Json r = Json::array();
    for (const Int& v : row) r.push_back(int_to_json(v));
    rows.push_back(std::move(r));
  }
  return Json{{"rows", std::move(rows)}};
}

IntMatrix matrix_from_json(const Json& j) {
  const Json& rows = member(j, "rows");
  if (!rows.is_array()) bad("field 'rows' must be an array");
  std::vector<IntVector> out;
  for (const Json& r : rows) {
    if (!r.is_array()) bad("each row must be an array");
    IntVector row;
    for (const Json& v : r) row.push_back(int_from_json(v, "rows"));
    out.push_back(std::move(row));
  }
  try {
    return IntMatrix(std::move(out));
  } catch (const Error& e) {
    bad(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad(path + ": " + e.what());
  }
}

std::string to_text(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace twistfactor
