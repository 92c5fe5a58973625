#include "rtdc/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace rtdc {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw FormatError((pointer.empty() ? "/" : pointer) + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(pointer, std::string("missing \"") + key + "\"");
  return *it;
}

const json& array_member(const json& j, const char* key, const std::string& pointer) {
  const json& a = member(j, key, pointer);
  if (!a.is_array()) schema_error(pointer + "/" + key, "expected an array");
  return a;
}

std::vector<std::string> ids(const json& a, const std::string& pointer) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_string()) schema_error(pointer + "/" + std::to_string(i), "expected a timepoint id string");
    out.push_back(a[i].get<std::string>());
  }
  return out;
}

TimepointRef tp(const Dtnu& d, const json& j, const std::string& pointer) {
  if (!j.is_string()) schema_error(pointer, "expected a timepoint id string");
  auto r = d.find(j.get<std::string>());
  if (!r) schema_error(pointer, "unknown timepoint \"" + j.get<std::string>() + "\"");
  return *r;
}

Interval interval(const json& lo, const json& hi, const std::string& lo_ptr, const std::string& hi_ptr,
                  const std::string& pointer) {
  TimeValue l = time_from_json(lo, lo_ptr), h = time_from_json(hi, hi_ptr);
  if (h < l) schema_error(pointer, "empty interval [" + l.to_string() + ", " + h.to_string() + "]");
  if (l.is_pos_inf() || h.is_neg_inf()) schema_error(pointer, "interval has no finite point");
  return Interval(l, h);
}

}  // namespace

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw FormatError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

TimeValue time_from_json(const json& j, const std::string& pointer) {
  if (j.is_number_integer()) return TimeValue(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return TimeValue::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      schema_error(pointer, e.what());
    }
  }
  schema_error(pointer, "expected a decimal string, \"inf\", \"-inf\" or an integer");
}

Dtnu dtnu_from_json(const json& j) {
  if (!j.is_object()) schema_error("", "expected an object");
  const auto& cs = array_member(j, "controllables", "");
  const auto& us = array_member(j, "uncontrollables", "");
  auto c_ids = ids(cs, "/controllables");
  auto u_ids = ids(us, "/uncontrollables");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < c_ids.size() + u_ids.size(); ++i) {
    const bool is_c = i < c_ids.size();
    const std::string& id = is_c ? c_ids[i] : u_ids[i - c_ids.size()];
    const std::string ptr = is_c ? "/controllables/" + std::to_string(i) : "/uncontrollables/" + std::to_string(i - c_ids.size());
    if (id.empty()) schema_error(ptr, "empty timepoint id");
    if (!seen.insert(id).second) schema_error(ptr, "duplicate timepoint id \"" + id + "\"");
  }
  Dtnu d(std::move(c_ids), std::move(u_ids));

  const auto& constraints = array_member(j, "constraints", "");
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const std::string dp = "/constraints/" + std::to_string(k);
    if (!constraints[k].is_array()) schema_error(dp, "expected an array of conjuncts");
    if (constraints[k].empty()) schema_error(dp, "a disjunct needs at least one conjunct");
    Disjunct disjunct;
    for (std::size_t i = 0; i < constraints[k].size(); ++i) {
      const std::string cp = dp + "/" + std::to_string(i);
      const json& c = constraints[k][i];
      const json& kind = member(c, "kind", cp);
      const TimepointRef v = tp(d, member(c, "v", cp), cp + "/v");
      const Interval iv = interval(member(c, "lo", cp), member(c, "hi", cp), cp + "/lo", cp + "/hi", cp);
      if (kind == "unary") {
        if (c.contains("vi")) schema_error(cp + "/vi", "unary conjuncts take no \"vi\"");
        disjunct.conjuncts.push_back(Conjunct::unary(v, iv));
      } else if (kind == "binary") {
        const TimepointRef vi = tp(d, member(c, "vi", cp), cp + "/vi");
        if (vi == v) schema_error(cp + "/vi", "binary conjunct relates a timepoint to itself");
        disjunct.conjuncts.push_back(Conjunct::binary(v, vi, iv));
      } else {
        schema_error(cp + "/kind", "expected \"unary\" or \"binary\"");
      }
    }
    d.add_constraint(std::move(disjunct));
  }

  const auto& links = array_member(j, "links", "");
  for (std::size_t k = 0; k < links.size(); ++k) {
    const std::string lp = "/links/" + std::to_string(k);
    ContingencyLink link;
    link.trigger = tp(d, member(links[k], "trigger", lp), lp + "/trigger");
    link.target = tp(d, member(links[k], "target", lp), lp + "/target");
    if (!d.is_controllable(link.trigger)) schema_error(lp + "/trigger", "trigger must be controllable");
    if (d.is_controllable(link.target)) schema_error(lp + "/target", "target must be uncontrollable");
    const auto& ivs = array_member(links[k], "intervals", lp);
    if (ivs.empty()) schema_error(lp + "/intervals", "a link needs at least one interval");
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      const std::string ip = lp + "/intervals/" + std::to_string(i);
      if (!ivs[i].is_array() || ivs[i].size() != 2) schema_error(ip, "expected [lo, hi]");
      Interval iv = interval(ivs[i][0], ivs[i][1], ip + "/0", ip + "/1", ip);
      if (iv.lo() < TimeValue(0)) schema_error(ip + "/0", "contingency bounds must be non-negative");
      if (!iv.hi().is_finite()) schema_error(ip + "/1", "contingency bounds must be finite");
      if (!link.intervals.empty() && iv.lo() < link.intervals.back().hi())
        schema_error(ip, "contingency intervals must be sorted and disjoint");
      link.intervals.push_back(iv);
    }
    d.add_link(std::move(link));
  }

  auto report = validate(d);
  if (!report.ok()) schema_error("", report.issues.front());
  return d;
}

json dtnu_to_json(const Dtnu& d) {
  json j;
  j["controllables"] = json::array();
  j["uncontrollables"] = json::array();
  for (const auto& t : d.timepoints())
    j[t.kind == TimepointKind::controllable ? "controllables" : "uncontrollables"].push_back(t.id);
  j["constraints"] = json::array();
  for (const auto& disjunct : d.constraints()) {
    json a = json::array();
    for (const auto& c : disjunct.conjuncts) {
      json o;
      o["kind"] = c.is_unary() ? "unary" : "binary";
      o["v"] = d.id(c.v);
      if (!c.is_unary()) o["vi"] = d.id(c.vi);
      o["lo"] = c.iv.lo().to_string();
      o["hi"] = c.iv.hi().to_string();
      a.push_back(std::move(o));
    }
    j["constraints"].push_back(std::move(a));
  }
  j["links"] = json::array();
  for (const auto& link : d.links()) {
    json ivs = json::array();
    for (const auto& iv : link.intervals) ivs.push_back({iv.lo().to_string(), iv.hi().to_string()});
    j["links"].push_back({{"trigger", d.id(link.trigger)}, {"intervals", ivs}, {"target", d.id(link.target)}});
  }
  return j;
}

Dtnu parse_dtnu(std::string_view text, const std::string& source) {
  const json j = parse_json_text(text, source);
  try {
    return dtnu_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(source + ": " + e.what());
  }
}

Dtnu load_dtnu(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dtnu(ss.str(), path.string());
}

std::string serialize_dtnu(const Dtnu& d) { return dtnu_to_json(d).dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace rtdc
