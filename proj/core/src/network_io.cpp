#include "meshcoop/network_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "meshcoop/error.hpp"

namespace meshcoop {

namespace {

using nlohmann::json;

class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ParseError("network file: " + path + ": " + what, path, 0);
  }

  static const json& field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing field");
    return *it;
  }

  static void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
        fail(path + "." + it.key(), "unknown field");
      }
    }
  }

  static double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  static int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(path, "integer out of range");
    return static_cast<int>(i);
  }

  static std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  static const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }
};

Params read_params(const json& obj) {
  const std::string base = "params";
  Reader::only_keys(obj, base,
                    {"price_per_rate", "cost_per_rate", "bandwidth_hz", "tx_range_m", "gain_coeff", "gain_exponent",
                     "tx_power_w", "noise_power_w", "area_side_m", "rate_req_range_kbps"});
  Params p;
  auto opt = [&](const char* key, double& dst) {
    auto it = obj.find(key);
    if (it != obj.end()) dst = Reader::number(*it, base + "." + key);
  };
  opt("price_per_rate", p.price_per_rate);
  opt("cost_per_rate", p.cost_per_rate);
  opt("bandwidth_hz", p.bandwidth_hz);
  opt("tx_range_m", p.tx_range_m);
  opt("gain_coeff", p.gain_coeff);
  opt("gain_exponent", p.gain_exponent);
  opt("tx_power_w", p.tx_power_w);
  opt("noise_power_w", p.noise_power_w);
  opt("area_side_m", p.area_side_m);
  if (auto it = obj.find("rate_req_range_kbps"); it != obj.end()) {
    const std::string path = base + ".rate_req_range_kbps";
    if (!it->is_array() || it->size() != 2) Reader::fail(path, "expected [min, max]");
    p.rate_req_min_kbps = Reader::number((*it)[0], path + "[0]");
    p.rate_req_max_kbps = Reader::number((*it)[1], path + "[1]");
  }
  return p;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

NetworkSpec parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("network file: line " + std::to_string(line) + ": " + e.what(), "", line);
  }
  Reader::only_keys(doc, "$", {"providers", "params", "nodes", "sessions", "capacity_overrides"});

  NetworkSpec spec;
  if (auto it = doc.find("params"); it != doc.end()) spec.params = read_params(*it);

  const json& nodes = Reader::array(Reader::field(doc, "$", "nodes"), "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "nodes[" + std::to_string(i) + "]";
    Reader::only_keys(nodes[i], path, {"id", "owner", "x", "y"});
    Node n;
    n.id = Reader::integer(Reader::field(nodes[i], path, "id"), path + ".id");
    n.owner = Reader::integer(Reader::field(nodes[i], path, "owner"), path + ".owner");
    n.position.x = Reader::number(Reader::field(nodes[i], path, "x"), path + ".x");
    n.position.y = Reader::number(Reader::field(nodes[i], path, "y"), path + ".y");
    spec.nodes.push_back(n);
  }

  const json& sessions = Reader::array(Reader::field(doc, "$", "sessions"), "sessions");
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const std::string path = "sessions[" + std::to_string(i) + "]";
    Reader::only_keys(sessions[i], path, {"id", "owner", "source", "destination", "rate_req_kbps"});
    FlowSession s;
    s.id = Reader::text(Reader::field(sessions[i], path, "id"), path + ".id");
    s.owner = Reader::integer(Reader::field(sessions[i], path, "owner"), path + ".owner");
    s.source = Reader::integer(Reader::field(sessions[i], path, "source"), path + ".source");
    s.destination = Reader::integer(Reader::field(sessions[i], path, "destination"), path + ".destination");
    s.rate_req_kbps = Reader::number(Reader::field(sessions[i], path, "rate_req_kbps"), path + ".rate_req_kbps");
    spec.sessions.push_back(std::move(s));
  }

  if (auto it = doc.find("capacity_overrides"); it != doc.end()) {
    const json& overrides = Reader::array(*it, "capacity_overrides");
    for (std::size_t i = 0; i < overrides.size(); ++i) {
      const std::string path = "capacity_overrides[" + std::to_string(i) + "]";
      Reader::only_keys(overrides[i], path, {"from", "to", "capacity_kbps"});
      CapacityOverride o;
      o.from = Reader::integer(Reader::field(overrides[i], path, "from"), path + ".from");
      o.to = Reader::integer(Reader::field(overrides[i], path, "to"), path + ".to");
      o.capacity_kbps = Reader::number(Reader::field(overrides[i], path, "capacity_kbps"), path + ".capacity_kbps");
      spec.capacity_overrides.push_back(o);
    }
  }

  if (auto it = doc.find("providers"); it != doc.end()) {
    spec.providers = Reader::integer(*it, "providers");
  } else {
    for (const auto& n : spec.nodes) spec.providers = std::max(spec.providers, n.owner);
    for (const auto& s : spec.sessions) spec.providers = std::max(spec.providers, s.owner);
  }
  validate(spec);
  return spec;
}

NetworkSpec read_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open network file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string write_network(const NetworkSpec& spec) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["providers"] = spec.providers;
  const Params& p = spec.params;
  doc["params"] = {
      {"price_per_rate", p.price_per_rate},
      {"cost_per_rate", p.cost_per_rate},
      {"bandwidth_hz", p.bandwidth_hz},
      {"tx_range_m", p.tx_range_m},
      {"gain_coeff", p.gain_coeff},
      {"gain_exponent", p.gain_exponent},
      {"tx_power_w", p.tx_power_w},
      {"noise_power_w", p.noise_power_w},
      {"area_side_m", p.area_side_m},
      {"rate_req_range_kbps", {p.rate_req_min_kbps, p.rate_req_max_kbps}},
  };
  ojson nodes = ojson::array();
  for (const Node& n : spec.nodes) {
    nodes.push_back({{"id", n.id}, {"owner", n.owner}, {"x", n.position.x}, {"y", n.position.y}});
  }
  doc["nodes"] = std::move(nodes);
  ojson sessions = ojson::array();
  for (const FlowSession& s : spec.sessions) {
    sessions.push_back({{"id", s.id},
                        {"owner", s.owner},
                        {"source", s.source},
                        {"destination", s.destination},
                        {"rate_req_kbps", s.rate_req_kbps}});
  }
  doc["sessions"] = std::move(sessions);
  ojson overrides = ojson::array();
  for (const CapacityOverride& o : spec.capacity_overrides) {
    overrides.push_back({{"from", o.from}, {"to", o.to}, {"capacity_kbps", o.capacity_kbps}});
  }
  doc["capacity_overrides"] = std::move(overrides);
  return doc.dump(2) + "\n";
}

void write_network(const NetworkSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write network file " + path.string());
  out << write_network(spec);
  if (!out) throw Error("failed writing network file " + path.string());
}

}  // namespace meshcoop
