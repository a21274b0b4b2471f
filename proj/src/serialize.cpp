#include "serialize.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace obproj {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::kParseError, where + ": " + why);
}

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) parse_fail(where, std::string("missing field '") + name + "'");
  return *it;
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where, "expected a number");
  return j.get<double>();
}

json vec_to_json(const Vec& v) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Vec vec_from_json(const json& j, int expected_len, const std::string& where) {
  const json& re = field(j, "re", where);
  if (!re.is_array()) parse_fail(where + ".re", "expected an array");
  const auto n = re.size();
  if (expected_len >= 0 && n != static_cast<std::size_t>(expected_len))
    parse_fail(where + ".re", "length " + std::to_string(n) +
                                  " does not match space dimension " +
                                  std::to_string(expected_len));
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[static_cast<int>(i)] =
        Complex(number_at(re[i], where + ".re[" + std::to_string(i) + "]"), 0.0);
  if (j.contains("im")) {
    const json& im = j["im"];
    if (!im.is_array() || im.size() != n)
      parse_fail(where + ".im", "expected an array matching 're'");
    for (std::size_t i = 0; i < n; ++i)
      v[static_cast<int>(i)].imag(
          number_at(im[i], where + ".im[" + std::to_string(i) + "]"));
  }
  return v;
}

json space_to_json_obj(const SpacePtr& s) {
  if (s->is_grid()) {
    const Grid& g = s->grid_info();
    return json{{"kind", "grid"},
                {"a", g.a},
                {"b", g.b},
                {"n_points", g.n_points()}};
  }
  return json{{"kind", "euclidean"}, {"dim", s->dim()}};
}

SpacePtr space_from_json_obj(const json& j, const std::string& where) {
  const json& kind = field(j, "kind", where);
  if (!kind.is_string()) parse_fail(where + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "euclidean") {
    const json& dim = field(j, "dim", where);
    if (!dim.is_number_integer() || dim.get<int>() < 1)
      parse_fail(where + ".dim", "expected a positive integer");
    return Space::euclidean(dim.get<int>());
  }
  if (k == "grid") {
    const double a = number_at(field(j, "a", where), where + ".a");
    const double b = number_at(field(j, "b", where), where + ".b");
    const json& np = field(j, "n_points", where);
    if (!np.is_number_integer() || np.get<int>() < 2)
      parse_fail(where + ".n_points", "expected an integer >= 2");
    return Space::grid(a, b, np.get<int>());
  }
  parse_fail(where + ".kind", "unknown space kind '" + k + "'");
}

json signals_to_json(const std::vector<Signal>& sigs) {
  json arr = json::array();
  for (const Signal& s : sigs) arr.push_back(vec_to_json(s.values));
  return arr;
}

std::vector<Signal> signals_from_json(const json& j, const SpacePtr& space,
                                      const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  std::vector<Signal> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.emplace_back(space, vec_from_json(j[i], space->dim(),
                                          where + "[" + std::to_string(i) + "]"));
  return out;
}

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the offset of the failure; report it as line/column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    parse_fail(what + " (line " + std::to_string(line) + ", column " +
                   std::to_string(col) + ")",
               e.what());
  }
}

}  // namespace

std::string state_to_json(const ProjectorState& state) {
  const ProjectorState::Stats& st = state.stats();
  json j{{"format", "obproj.state"},
         {"version", 1},
         {"space", space_to_json_obj(state.space())},
         {"dep_tol", state.dep_tol()},
         {"wperp_basis", signals_to_json(state.wperp_basis())},
         {"v", signals_to_json(state.atoms())},
         {"u", signals_to_json(state.w_components())},
         {"duals", signals_to_json(state.duals())},
         {"q_basis", signals_to_json(state.q_basis())},
         {"stats",
          json{{"independent_updates", st.independent_updates},
               {"dependent_updates", st.dependent_updates},
               {"redundant_downdates", st.redundant_downdates},
               {"independent_downdates", st.independent_downdates},
               {"min_residual_ratio", st.min_residual_ratio}}}};
  return j.dump(2) + "\n";
}

ProjectorState state_from_json(const std::string& text) {
  const json j = parse_text(text, "state document");
  const std::string where = "state";
  const json& fmt = field(j, "format", where);
  if (!fmt.is_string() || fmt.get<std::string>() != "obproj.state")
    parse_fail(where + ".format", "not an obproj.state document");
  SpacePtr space = space_from_json_obj(field(j, "space", where), where + ".space");
  const double dep_tol = number_at(field(j, "dep_tol", where), where + ".dep_tol");

  ProjectorState::Stats st;
  if (j.contains("stats")) {
    const json& s = j["stats"];
    st.independent_updates = s.value("independent_updates", 0L);
    st.dependent_updates = s.value("dependent_updates", 0L);
    st.redundant_downdates = s.value("redundant_downdates", 0L);
    st.independent_downdates = s.value("independent_downdates", 0L);
    st.min_residual_ratio = s.value("min_residual_ratio", 1.0);
  }
  return ProjectorState::restore(
      space,
      signals_from_json(field(j, "wperp_basis", where), space, where + ".wperp_basis"),
      signals_from_json(field(j, "v", where), space, where + ".v"),
      signals_from_json(field(j, "u", where), space, where + ".u"),
      signals_from_json(field(j, "duals", where), space, where + ".duals"),
      signals_from_json(field(j, "q_basis", where), space, where + ".q_basis"),
      dep_tol, st);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + path + "'");
}

void save_state(const ProjectorState& state, const std::string& path) {
  write_file(path, state_to_json(state));
}

ProjectorState load_state(const std::string& path) {
  return state_from_json(read_file(path));
}

std::string signal_to_json(const Signal& sig) {
  return vec_to_json(sig.values).dump(2) + "\n";
}

Signal signal_from_json(const std::string& text, const SpacePtr& space) {
  const json j = parse_text(text, "signal document");
  return Signal(space, vec_from_json(j, space->dim(), "signal"));
}

Signal load_signal(const std::string& path, const SpacePtr& space) {
  return signal_from_json(read_file(path), space);
}

void save_signal(const Signal& sig, const std::string& path) {
  write_file(path, signal_to_json(sig));
}

CustomModel load_custom_model(const std::string& path) {
  const json j = parse_text(read_file(path), "model file '" + path + "'");
  const std::string where = "model";
  CustomModel m;
  m.space = space_from_json_obj(field(j, "space", where), where + ".space");
  m.signal = Signal(m.space, vec_from_json(field(j, "signal", where),
                                           m.space->dim(), where + ".signal"));
  m.atoms = signals_from_json(field(j, "atoms", where), m.space, where + ".atoms");
  if (m.atoms.empty()) parse_fail(where + ".atoms", "needs at least one atom");
  if (j.contains("wperp"))
    m.wperp = signals_from_json(j["wperp"], m.space, where + ".wperp");
  return m;
}

}  // namespace obproj
