#include "relsim/netfile.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace relsim {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

[[noreturn]] void fail(const std::string& origin, int line_no, const std::string& what) {
  throw ParseError(origin + ":" + std::to_string(line_no) + ": " + what);
}

struct Tokenizer {
  const std::string& origin;
  int line_no;
  std::istringstream in;

  Tokenizer(const std::string& origin, int line_no, const std::string& rest)
      : origin(origin), line_no(line_no), in(rest) {}

  double number(const char* what) {
    double v;
    if (!(in >> v)) fail(origin, line_no, std::string("expected ") + what);
    return v;
  }
  Id id(const char* what) {
    long long v;
    if (!(in >> v) || v < 0) fail(origin, line_no, std::string("expected ") + what);
    return static_cast<Id>(v);
  }
  int integer(const char* what) {
    int v;
    if (!(in >> v)) fail(origin, line_no, std::string("expected ") + what);
    return v;
  }
  void done() {
    std::string extra;
    if (in >> extra) fail(origin, line_no, "unexpected trailing field '" + extra + "'");
  }
};

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

NetworkModel parse_network_text(const std::string& text, const std::string& origin) {
  NetworkModel model;
  std::set<Id> bus_ids, line_ids, gen_ids, load_ids, area_ids;
  bool format_seen = false;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    std::string rest;
    std::getline(ls, rest);
    Tokenizer tok(origin, line_no, rest);

    if (!format_seen) {
      if (keyword != "FORMAT") fail(origin, line_no, "file must start with 'FORMAT v1'");
      std::string version;
      if (!(tok.in >> version) || version != "v1")
        fail(origin, line_no, "unsupported format version");
      format_seen = true;
      continue;
    }

    if (keyword == "BASE_MVA") {
      model.base_mva = tok.number("base MVA");
      tok.done();
    } else if (keyword == "PARAMS") {
      model.params.beta = tok.number("beta");
      model.params.eta = tok.number("eta");
      model.params.xi = tok.number("xi");
      model.params.shed_weight = tok.number("W");
      model.params.demand_sigma = tok.number("sigma");
      tok.done();
    } else if (keyword == "AREA") {
      ControlArea a;
      a.id = tok.id("area id");
      a.contact_delay_min = tok.number("contact delay");
      a.response_delay_min = tok.number("response delay");
      tok.done();
      if (!area_ids.insert(a.id).second)
        fail(origin, line_no, "duplicate area id " + std::to_string(a.id));
      model.areas.push_back(a);
    } else if (keyword == "BUS") {
      Bus b;
      b.id = tok.id("bus id");
      b.area_id = tok.id("area id");
      tok.done();
      if (!bus_ids.insert(b.id).second)
        fail(origin, line_no, "duplicate bus id " + std::to_string(b.id));
      model.buses.push_back(b);
    } else if (keyword == "LINE") {
      Line l;
      l.id = tok.id("line id");
      l.from_bus = tok.id("from bus");
      l.to_bus = tok.id("to bus");
      l.reactance_pu = tok.number("reactance");
      l.rating_mw = tok.number("rating");
      l.failure_rate_y = tok.number("failure rate");
      l.repair_rate_h = tok.number("repair rate");
      l.reclose_delay_h = tok.number("reclose delay");
      l.responsible_area = tok.id("responsible area");
      tok.done();
      if (!line_ids.insert(l.id).second)
        fail(origin, line_no, "duplicate line id " + std::to_string(l.id));
      model.lines.push_back(l);
    } else if (keyword == "GEN") {
      Generator g;
      g.id = tok.id("generator id");
      g.bus = tok.id("bus");
      g.capacity_mw = tok.number("capacity");
      g.priority = tok.integer("priority");
      g.failure_rate_y = tok.number("failure rate");
      g.repair_rate_h = tok.number("repair rate");
      tok.done();
      if (!gen_ids.insert(g.id).second)
        fail(origin, line_no, "duplicate generator id " + std::to_string(g.id));
      model.generators.push_back(g);
    } else if (keyword == "LOAD") {
      Load d;
      d.id = tok.id("load id");
      d.bus = tok.id("bus");
      d.peak_mw = tok.number("peak demand");
      tok.done();
      if (!load_ids.insert(d.id).second)
        fail(origin, line_no, "duplicate load id " + std::to_string(d.id));
      model.loads.push_back(d);
    } else {
      fail(origin, line_no, "unknown record type '" + keyword + "'");
    }
  }
  if (!format_seen) throw ParseError(origin + ": empty file (missing FORMAT v1)");

  model.finalize();
  const ValidationReport report = validate(model);
  if (!report.ok()) {
    std::string what = origin + ": model validation failed:";
    for (const auto& issue : report.issues) what += "\n  " + issue;
    throw ParseError(what);
  }
  return model;
}

NetworkModel parse_network(const std::string& path) {
  return parse_network_text(read_file(path), path);
}

std::string serialize_network(const NetworkModel& model) {
  std::ostringstream os;
  os << "FORMAT v1\n";
  os << "BASE_MVA " << fmt_full(model.base_mva) << "\n";
  os << "PARAMS " << fmt_full(model.params.beta) << " " << fmt_full(model.params.eta) << " "
     << fmt_full(model.params.xi) << " " << fmt_full(model.params.shed_weight) << " "
     << fmt_full(model.params.demand_sigma) << "\n";
  for (const auto& a : model.areas)
    os << "AREA " << a.id << " " << fmt_full(a.contact_delay_min) << " "
       << fmt_full(a.response_delay_min) << "\n";
  for (const auto& b : model.buses) os << "BUS " << b.id << " " << b.area_id << "\n";
  for (const auto& l : model.lines)
    os << "LINE " << l.id << " " << l.from_bus << " " << l.to_bus << " "
       << fmt_full(l.reactance_pu) << " " << fmt_full(l.rating_mw) << " "
       << fmt_full(l.failure_rate_y) << " " << fmt_full(l.repair_rate_h) << " "
       << fmt_full(l.reclose_delay_h) << " " << l.responsible_area << "\n";
  for (const auto& g : model.generators)
    os << "GEN " << g.id << " " << g.bus << " " << fmt_full(g.capacity_mw) << " " << g.priority
       << " " << fmt_full(g.failure_rate_y) << " " << fmt_full(g.repair_rate_h) << "\n";
  for (const auto& d : model.loads)
    os << "LOAD " << d.id << " " << d.bus << " " << fmt_full(d.peak_mw) << "\n";
  return os.str();
}

DemandProfile parse_profile_text(const std::string& text, int n_areas,
                                 const std::string& origin) {
  if (n_areas < 1) throw ParseError("profile needs at least one area column");
  DemandProfile profile;
  profile.n_areas = n_areas;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    double v;
    int count = 0;
    while (ls >> v) {
      if (!(v >= 0.0 && v <= 1.0))
        fail(origin, line_no, "demand factor " + std::to_string(v) + " outside [0, 1]");
      profile.values.push_back(v);
      ++count;
    }
    std::string extra;
    ls.clear();
    if (ls >> extra) fail(origin, line_no, "non-numeric field '" + extra + "'");
    if (count == 0) continue;  // blank or comment line
    if (count != n_areas)
      fail(origin, line_no,
           "expected " + std::to_string(n_areas) + " columns, found " + std::to_string(count));
  }
  if (profile.values.empty()) throw ParseError(origin + ": empty profile");
  return profile;
}

DemandProfile parse_profile(const std::string& path, int n_areas) {
  return parse_profile_text(read_file(path), n_areas, path);
}

}  // namespace relsim
