#include "vlcsec/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vlcsec/errors.hpp"

namespace vlcsec::cfg {

using nlohmann::json;

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

namespace {

constexpr double kDefaultPowerWatts = 0.25;

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  return j;
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw SchemaError(path + "." + key + ": unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number");
  return v.get<double>();
}

long long get_integer(const json& obj, const std::string& path, const char* key,
                      long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key + ": expected an integer");
  return v.get<long long>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw SchemaError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

void require_range(bool ok, const std::string& what) {
  if (!ok) throw RangeError(what);
}

std::vector<Vec3> scenario_users(const std::string& name, double device_z) {
  using P = std::pair<double, double>;
  std::vector<P> xy;
  if (name == "1") {
    xy = {{6, 6}, {34, 6}, {34, 34}, {6, 34}, {20, 10}, {20, 30}};
  } else if (name == "2") {
    xy = {{13, 16}, {20, 12}, {27, 16}, {27, 24}, {20, 28}, {13, 24}};
  } else if (name == "3") {
    xy = {{10.6, 14.5}, {15.3, 22.7}, {5.9, 22.7}, {34.1, 20}, {34.1, 32.2}, {34.1, 7.8}};
  } else {
    throw RangeError("scenario: unknown scenario name '" + name + "'");
  }
  std::vector<Vec3> users;
  users.reserve(xy.size());
  for (const auto& [x, y] : xy) users.emplace_back(x, y, device_z);
  return users;
}

topology::Strategy parse_strategy(const std::string& s, const std::string& path) {
  if (s == "broadcasting") return topology::Strategy::broadcasting;
  if (s == "simple" || s == "simple_linking") return topology::Strategy::simple_linking;
  if (s == "smart" || s == "smart_linking") return topology::Strategy::smart_linking;
  throw RangeError(path + ": unknown strategy '" + s + "'");
}

sim::EvePlacement parse_eve_spec(const std::string& spec) {
  sim::EvePlacement eve;
  if (spec == "uniform") {
    eve.mode = sim::EveMode::uniform;
    return eve;
  }
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "fixed") {
    const auto comma = tail.find(',');
    if (comma == std::string::npos) throw RangeError("eve: expected fixed:x,y");
    eve.mode = sim::EveMode::fixed;
    eve.x = std::stod(tail.substr(0, comma));
    eve.y = std::stod(tail.substr(comma + 1));
    return eve;
  }
  if (head == "grid") {
    if (tail.empty()) throw RangeError("eve: expected grid:step");
    eve.mode = sim::EveMode::grid;
    eve.step = std::stod(tail);
    return eve;
  }
  if (head == "clone") {
    if (tail.empty()) throw RangeError("eve: expected clone:user_index");
    eve.mode = sim::EveMode::clone;
    eve.clone_of = std::stoi(tail);
    return eve;
  }
  throw RangeError("eve: unknown placement '" + spec + "'");
}

}  // namespace

Resolved resolve_config_text(const std::string& text, const Overrides& overrides) {
  json doc;
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
  }
  require_object(doc, "config");
  check_keys(doc, "config",
             {"room", "led", "pd", "noise", "body", "noma", "scenario", "eve", "run"});

  const json empty = json::object();
  auto section = [&](const char* key, const std::set<std::string>& allowed) -> json {
    if (!doc.contains(key)) return empty;
    const json& s = require_object(doc.at(key), key);
    check_keys(s, key, allowed);
    return s;
  };

  Resolved out;
  sim::CampaignConfig& c = out.campaign;

  const json room = section("room", {"L", "W", "Z", "z_D"});
  c.sys.room_length = get_number(room, "room", "L", 40.0);
  c.sys.room_width = get_number(room, "room", "W", 40.0);
  c.sys.room_height = get_number(room, "room", "Z", 3.98);
  c.sys.device_z = get_number(room, "room", "z_D", 0.85);
  require_range(c.sys.room_length > 0 && c.sys.room_width > 0, "room: L and W must be positive");
  require_range(c.sys.device_z > 0 && c.sys.device_z < c.sys.room_height,
                "room: need 0 < z_D < Z");

  const json led = section("led", {"theta_half_deg", "lattice", "side", "anchor"});
  const double theta_deg = get_number(led, "led", "theta_half_deg", 70.0);
  require_range(theta_deg > 0 && theta_deg < 90, "led.theta_half_deg: need (0, 90)");
  c.sys.theta_half = channel::deg2rad(theta_deg);
  out.lattice.side = get_number(led, "led", "side", 9.6);
  require_range(out.lattice.side > 0, "led.side: must be positive");
  const std::string lattice_kind = get_string(led, "led", "lattice", "triangular");
  if (lattice_kind == "triangular") {
    out.lattice.kind = topology::LatticeKind::triangular;
  } else if (lattice_kind == "square") {
    out.lattice.kind = topology::LatticeKind::square;
  } else {
    throw RangeError("led.lattice: expected 'triangular' or 'square'");
  }
  out.lattice.anchor_x = 20.0;
  out.lattice.anchor_y = 20.0;
  if (led.contains("anchor")) {
    const json& anchor = led.at("anchor");
    if (!anchor.is_array() || anchor.size() != 2 || !anchor[0].is_number() ||
        !anchor[1].is_number()) {
      throw SchemaError("led.anchor: expected [x, y]");
    }
    out.lattice.anchor_x = anchor[0].get<double>();
    out.lattice.anchor_y = anchor[1].get<double>();
  }

  const json pd = section("pd", {"A_cm2", "Psi_deg", "eta", "R_pd"});
  const double area_cm2 = get_number(pd, "pd", "A_cm2", 1.0);
  require_range(area_cm2 > 0, "pd.A_cm2: must be positive");
  c.sys.pd.area = area_cm2 * 1e-4;
  const double psi_deg = get_number(pd, "pd", "Psi_deg", 60.0);
  require_range(psi_deg > 0 && psi_deg <= 90, "pd.Psi_deg: need (0, 90]");
  c.sys.pd.fov = channel::deg2rad(psi_deg);
  c.sys.pd.refractive_index = get_number(pd, "pd", "eta", 1.5);
  require_range(c.sys.pd.refractive_index > 1 && c.sys.pd.refractive_index < 2,
                "pd.eta: need (1, 2)");
  c.sys.pd.responsivity = get_number(pd, "pd", "R_pd", 1.0);
  require_range(c.sys.pd.responsivity > 0, "pd.R_pd: must be positive");

  const json noise = section("noise", {"N0_dBm"});
  c.sys.noise_var = dbm_to_watts(get_number(noise, "noise", "N0_dBm", -98.35));

  const json body = section("body", {"H", "l_d", "r"});
  c.sys.body.height = get_number(body, "body", "H", 1.6);
  c.sys.body.device_offset = get_number(body, "body", "l_d", 0.4);
  c.sys.body.radius = get_number(body, "body", "r", 0.2);
  require_range(c.sys.body.radius > 0, "body.r: must be positive");
  require_range(c.sys.body.device_offset >= 0, "body.l_d: must be nonnegative");
  require_range(c.sys.body.height >= c.sys.device_z && c.sys.body.height < c.sys.room_height,
                "body.H: need z_D <= H < Z");

  const json noma_s = section("noma", {"zeta", "allocation", "interference_set"});
  c.zeta = get_number(noma_s, "noma", "zeta", 0.6);
  require_range(c.zeta > 0.5 && c.zeta <= 1.0, "noma.zeta: need (0.5, 1]");
  std::string allocation = get_string(noma_s, "noma", "allocation", "fixed");
  if (overrides.allocation) allocation = *overrides.allocation;
  if (allocation == "fixed") {
    c.scheme = sim::AllocationScheme::fixed;
  } else if (allocation == "optimized") {
    c.scheme = sim::AllocationScheme::optimized;
  } else {
    throw RangeError("noma.allocation: expected 'fixed' or 'optimized'");
  }
  const std::string iset = get_string(noma_s, "noma", "interference_set", "physical");
  if (iset == "physical") {
    c.interference = noma::InterferenceSet::physical;
  } else if (iset == "literal") {
    c.interference = noma::InterferenceSet::literal;
  } else {
    throw RangeError("noma.interference_set: expected 'physical' or 'literal'");
  }

  // Scenario: a Table-style name or an explicit user list.
  out.scenario_name = "1";
  std::optional<std::vector<Vec3>> explicit_users;
  if (doc.contains("scenario")) {
    const json& sc = doc.at("scenario");
    if (sc.is_string()) {
      out.scenario_name = sc.get<std::string>();
    } else if (sc.is_object()) {
      check_keys(sc, "scenario", {"name", "users"});
      out.scenario_name = get_string(sc, "scenario", "name", "custom");
      if (sc.contains("users")) {
        const json& users = sc.at("users");
        if (!users.is_array() || users.empty()) {
          throw SchemaError("scenario.users: expected a nonempty array of [x, y]");
        }
        std::vector<Vec3> list;
        for (const json& u : users) {
          if (!u.is_array() || u.size() != 2 || !u[0].is_number() || !u[1].is_number()) {
            throw SchemaError("scenario.users: expected [x, y] pairs");
          }
          list.emplace_back(u[0].get<double>(), u[1].get<double>(), c.sys.device_z);
        }
        explicit_users = std::move(list);
      }
    } else {
      throw SchemaError("scenario: expected a name or an object");
    }
  }
  if (overrides.scenario) {
    out.scenario_name = *overrides.scenario;
    explicit_users.reset();
  }
  c.scenario.name = out.scenario_name;
  c.scenario.users = explicit_users ? std::move(*explicit_users)
                                    : scenario_users(out.scenario_name, c.sys.device_z);
  for (const Vec3& u : c.scenario.users) {
    require_range(u.x >= 0 && u.x <= c.sys.room_length && u.y >= 0 && u.y <= c.sys.room_width,
                  "scenario.users: position outside the room");
  }

  const json eve = section("eve", {"mode", "x", "y", "box", "step", "user"});
  sim::EvePlacement& ep = c.scenario.eve;
  const std::string eve_mode = get_string(eve, "eve", "mode", "uniform");
  if (eve_mode == "uniform") {
    ep.mode = sim::EveMode::uniform;
  } else if (eve_mode == "fixed") {
    ep.mode = sim::EveMode::fixed;
  } else if (eve_mode == "grid") {
    ep.mode = sim::EveMode::grid;
  } else if (eve_mode == "clone") {
    ep.mode = sim::EveMode::clone;
  } else {
    throw RangeError("eve.mode: expected uniform, fixed, grid, or clone");
  }
  ep.x = get_number(eve, "eve", "x", 20.0);
  ep.y = get_number(eve, "eve", "y", 20.0);
  ep.step = get_number(eve, "eve", "step", 2.0);
  ep.clone_of = static_cast<int>(get_integer(eve, "eve", "user", 0));
  if (eve.contains("box")) {
    const json& box = eve.at("box");
    if (!box.is_array() || box.size() != 4) {
      throw SchemaError("eve.box: expected [x_min, x_max, y_min, y_max]");
    }
    for (const json& v : box) {
      if (!v.is_number()) throw SchemaError("eve.box: expected numbers");
    }
    ep.x_min = box[0].get<double>();
    ep.x_max = box[1].get<double>();
    ep.y_min = box[2].get<double>();
    ep.y_max = box[3].get<double>();
  }
  if (overrides.eve) {
    const sim::EvePlacement parsed = parse_eve_spec(*overrides.eve);
    const auto box_x_min = ep.x_min, box_x_max = ep.x_max;
    const auto box_y_min = ep.y_min, box_y_max = ep.y_max;
    ep = parsed;
    if (parsed.mode == sim::EveMode::uniform || parsed.mode == sim::EveMode::grid) {
      ep.x_min = box_x_min;
      ep.x_max = box_x_max;
      ep.y_min = box_y_min;
      ep.y_max = box_y_max;
    }
  }
  require_range(ep.x_min <= ep.x_max && ep.y_min <= ep.y_max, "eve.box: degenerate bounds");
  require_range(ep.x_min >= 0 && ep.x_max <= c.sys.room_length && ep.y_min >= 0 &&
                    ep.y_max <= c.sys.room_width,
                "eve.box: outside the room");
  if (ep.mode == sim::EveMode::fixed) {
    require_range(ep.x >= 0 && ep.x <= c.sys.room_length && ep.y >= 0 &&
                      ep.y <= c.sys.room_width,
                  "eve: fixed position outside the room");
  }
  if (ep.mode == sim::EveMode::grid) require_range(ep.step > 0, "eve.step: must be positive");
  if (ep.mode == sim::EveMode::clone) {
    require_range(ep.clone_of >= 0 &&
                      ep.clone_of < static_cast<int>(c.scenario.users.size()),
                  "eve.user: clone index out of range");
  }

  const json run = section("run", {"strategy", "trials", "seed", "power_dbm", "threads"});
  std::string strategy = get_string(run, "run", "strategy", "broadcasting");
  if (overrides.strategy) strategy = *overrides.strategy;
  c.strategy = parse_strategy(strategy, "run.strategy");
  c.trials = get_integer(run, "run", "trials", 10000);
  if (overrides.trials) c.trials = *overrides.trials;
  require_range(c.trials >= 1, "run.trials: must be >= 1");
  c.master_seed = static_cast<std::uint64_t>(get_integer(run, "run", "seed", 1));
  if (overrides.seed) c.master_seed = *overrides.seed;
  c.threads = static_cast<int>(get_integer(run, "run", "threads", 0));
  if (overrides.threads) c.threads = *overrides.threads;

  std::vector<double> power_dbm;
  if (run.contains("power_dbm")) {
    const json& p = run.at("power_dbm");
    if (p.is_number()) {
      power_dbm.push_back(p.get<double>());
    } else if (p.is_array() && !p.empty()) {
      for (const json& v : p) {
        if (!v.is_number()) throw SchemaError("run.power_dbm: expected numbers");
        power_dbm.push_back(v.get<double>());
      }
    } else {
      throw SchemaError("run.power_dbm: expected a number or a nonempty array");
    }
  }
  if (!overrides.power_dbm.empty()) power_dbm = overrides.power_dbm;
  if (power_dbm.empty()) power_dbm.push_back(watts_to_dbm(kDefaultPowerWatts));
  c.power_dbm = power_dbm;
  c.power_watts.clear();
  for (double dbm : power_dbm) c.power_watts.push_back(dbm_to_watts(dbm));

  // LED lattice, last: the triangular generator enforces the coverage bound.
  if (out.lattice.kind == topology::LatticeKind::triangular) {
    c.leds = topology::triangular_lattice(c.sys.room_length, c.sys.room_width,
                                          c.sys.room_height, c.sys.device_z,
                                          c.sys.theta_half, out.lattice.side,
                                          out.lattice.anchor_x, out.lattice.anchor_y);
  } else {
    c.leds = topology::square_lattice(c.sys.room_length, c.sys.room_width,
                                      c.sys.room_height, out.lattice.side,
                                      out.lattice.anchor_x, out.lattice.anchor_y);
  }
  require_range(!c.leds.empty(), "led: lattice produced no LEDs inside the room");
  return out;
}

Resolved load_config(const std::string& path, const Overrides& overrides) {
  if (path.empty()) return resolve_config_text("", overrides);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  // A manifest embeds the resolved configuration it ran with; accept it as a
  // config source so a run can be reproduced from its manifest alone.
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (!blank) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("tool") && doc.contains("config")) {
      text = doc.at("config").dump();
    }
  }
  return resolve_config_text(text, overrides);
}

std::string config_echo_json(const Resolved& resolved) {
  const sim::CampaignConfig& c = resolved.campaign;
  json doc;
  doc["room"] = {{"L", c.sys.room_length},
                 {"W", c.sys.room_width},
                 {"Z", c.sys.room_height},
                 {"z_D", c.sys.device_z}};
  doc["led"] = {{"theta_half_deg", c.sys.theta_half * 180.0 / M_PI},
                {"lattice", resolved.lattice.kind == topology::LatticeKind::triangular
                                ? "triangular"
                                : "square"},
                {"side", resolved.lattice.side},
                {"anchor", {resolved.lattice.anchor_x, resolved.lattice.anchor_y}}};
  doc["pd"] = {{"A_cm2", c.sys.pd.area * 1e4},
               {"Psi_deg", c.sys.pd.fov * 180.0 / M_PI},
               {"eta", c.sys.pd.refractive_index},
               {"R_pd", c.sys.pd.responsivity}};
  doc["noise"] = {{"N0_dBm", watts_to_dbm(c.sys.noise_var)}};
  doc["body"] = {{"H", c.sys.body.height},
                 {"l_d", c.sys.body.device_offset},
                 {"r", c.sys.body.radius}};
  doc["noma"] = {{"zeta", c.zeta},
                 {"allocation",
                  c.scheme == sim::AllocationScheme::fixed ? "fixed" : "optimized"},
                 {"interference_set",
                  c.interference == noma::InterferenceSet::physical ? "physical"
                                                                    : "literal"}};
  json users = json::array();
  for (const Vec3& u : c.scenario.users) users.push_back({u.x, u.y});
  doc["scenario"] = {{"name", resolved.scenario_name}, {"users", users}};

  const sim::EvePlacement& ep = c.scenario.eve;
  json eve;
  switch (ep.mode) {
    case sim::EveMode::uniform:
      eve = {{"mode", "uniform"}, {"box", {ep.x_min, ep.x_max, ep.y_min, ep.y_max}}};
      break;
    case sim::EveMode::fixed:
      eve = {{"mode", "fixed"}, {"x", ep.x}, {"y", ep.y}};
      break;
    case sim::EveMode::grid:
      eve = {{"mode", "grid"},
             {"box", {ep.x_min, ep.x_max, ep.y_min, ep.y_max}},
             {"step", ep.step}};
      break;
    case sim::EveMode::clone:
      eve = {{"mode", "clone"}, {"user", ep.clone_of}};
      break;
  }
  doc["eve"] = eve;

  json power = json::array();
  for (std::size_t i = 0; i < c.power_watts.size(); ++i) {
    power.push_back(i < c.power_dbm.size() ? c.power_dbm[i]
                                           : watts_to_dbm(c.power_watts[i]));
  }
  std::string strategy = "broadcasting";
  if (c.strategy == topology::Strategy::simple_linking) strategy = "simple_linking";
  if (c.strategy == topology::Strategy::smart_linking) strategy = "smart_linking";
  doc["run"] = {{"strategy", strategy},
                {"trials", c.trials},
                {"seed", c.master_seed},
                {"power_dbm", power},
                {"threads", c.threads}};
  return doc.dump(2);
}

}  // namespace vlcsec::cfg
