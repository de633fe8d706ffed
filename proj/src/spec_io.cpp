#include "inertol/spec_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace inertol {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view source, const std::string& where, const std::string& what) {
  std::string msg(source);
  if (!where.empty()) msg += ": " + where;
  msg += ": " + what;
  throw Error(ErrorCategory::Parse, msg);
}

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Fields {
 public:
  Fields(const json& object, std::string path, std::string_view source,
         std::set<std::string> allowed)
      : object_(object), path_(std::move(path)), source_(source) {
    if (!object_.is_object()) fail(source_, path_or_root(), "expected an object");
    for (const auto& [key, value] : object_.items()) {
      if (!allowed.count(key)) fail(source_, child(key), "unknown field");
    }
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  double number(const std::string& key) const {
    if (!has(key)) fail(source_, child(key), "missing field");
    return number_at(key);
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number_at(key) : fallback;
  }

  std::string string(const std::string& key) const {
    if (!has(key)) fail(source_, child(key), "missing field");
    const auto& v = object_.at(key);
    if (!v.is_string()) fail(source_, child(key), "expected a string");
    return v.get<std::string>();
  }

  const json& at(const std::string& key) const {
    if (!has(key)) fail(source_, child(key), "missing field");
    return object_.at(key);
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  double number_at(const std::string& key) const {
    const auto& v = object_.at(key);
    if (!v.is_number()) fail(source_, child(key), "expected a number");
    return v.get<double>();
  }

  std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }

  const json& object_;
  std::string path_;
  std::string_view source_;
};

// Re-raises model validation failures as parse errors tagged with `where`.
template <class F>
auto with_context(std::string_view source, const std::string& where, F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    fail(source, where, e.what());
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

AssemblyModel parse_assembly_spec_text(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCategory::Parse, std::string(source) + ":" + std::to_string(line) + ":" +
                                          std::to_string(col) + ": malformed JSON: " + e.what());
  }

  const Fields root(doc, "", source, {"name", "alpha0", "resultant", "components"});
  const std::string name = root.string("name");

  const Fields res(root.at("resultant"), "resultant", source, {"target", "width", "inertia"});
  const double target = res.number("target");
  if (res.has("width") == res.has("inertia")) {
    fail(source, "resultant", "exactly one of 'width' or 'inertia' is required");
  }
  const ResultantSpec resultant = with_context(source, "resultant", [&] {
    return res.has("width") ? ResultantSpec::interval(target, res.number("width"))
                            : ResultantSpec::inertia(target, res.number("inertia"));
  });

  const json& list = root.at("components");
  if (!list.is_array()) fail(source, "components", "expected an array");
  if (list.empty()) fail(source, "components", "at least one component is required");

  std::vector<ComponentSpec> components;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "components[" + std::to_string(i) + "]";
    const Fields f(list[i], where, source, {"name", "alpha", "beta", "target"});
    ComponentSpec c;
    c.name = f.string("name");
    c.alpha = f.number("alpha");
    c.beta = f.number_or("beta", 1.0);
    c.target = f.number_or("target", 0.0);
    if (c.name.empty()) fail(source, f.child("name"), "must not be empty");
    if (!(c.beta > 0.0)) fail(source, f.child("beta"), "must be > 0");
    if (!names.insert(c.name).second) {
      fail(source, f.child("name"), "duplicate component name '" + c.name + "'");
    }
    components.push_back(std::move(c));
  }

  std::optional<double> alpha0;
  if (root.has("alpha0")) alpha0 = root.number("alpha0");
  return with_context(source, "", [&] {
    return AssemblyModel(name, std::move(components), resultant, alpha0);
  });
}

AssemblyModel parse_assembly_spec(const std::filesystem::path& path) {
  return parse_assembly_spec_text(read_file(path), path.string());
}

std::string serialize_assembly_spec(const AssemblyModel& model) {
  json doc;
  doc["name"] = model.name();
  doc["alpha0"] = model.alpha0();
  const auto& r = model.resultant();
  json res;
  res["target"] = r.target();
  if (r.is_interval()) {
    res["width"] = r.width();
  } else {
    res["inertia"] = r.max_inertia();
  }
  doc["resultant"] = res;
  json list = json::array();
  for (const auto& c : model.components()) {
    list.push_back({{"name", c.name}, {"alpha", c.alpha}, {"beta", c.beta}, {"target", c.target}});
  }
  doc["components"] = list;
  return doc.dump(2) + "\n";
}

BatchData parse_batch_data_text(std::string_view text, const AssemblyModel& model,
                                std::string_view source) {
  auto fail_data = [&](std::size_t line, const std::string& what) -> void {
    throw Error(ErrorCategory::Data, std::string(source) + ":" + std::to_string(line) + ": " + what);
  };

  const auto comps = model.components();
  std::map<std::string, std::size_t, std::less<>> slot_of;
  for (std::size_t i = 0; i < comps.size(); ++i) slot_of.emplace(comps[i].name, i);

  BatchData data;
  data.samples.resize(comps.size());
  std::vector<std::size_t> column_slot;
  bool have_header = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto cells = split_csv(line);
    if (!have_header) {
      std::set<std::size_t> seen;
      for (const auto cell : cells) {
        const auto it = slot_of.find(cell);
        if (it == slot_of.end()) {
          fail_data(line_no, "column '" + std::string(cell) + "' is not a declared component");
        }
        if (!seen.insert(it->second).second) {
          fail_data(line_no, "column '" + std::string(cell) + "' appears twice");
        }
        column_slot.push_back(it->second);
      }
      for (const auto& c : comps) {
        if (!seen.count(slot_of.find(c.name)->second)) {
          fail_data(line_no, "no column for component '" + c.name + "'");
        }
      }
      have_header = true;
      continue;
    }

    if (cells.size() != column_slot.size()) {
      fail_data(line_no, "expected " + std::to_string(column_slot.size()) + " values, got " +
                             std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double value = 0.0;
      const auto cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() ||
          !std::isfinite(value)) {
        fail_data(line_no, "'" + std::string(cell) + "' is not a decimal number");
      }
      data.samples[column_slot[c]].push_back(value);
    }
    ++data.rows;
  }
  if (!have_header) fail_data(line_no, "missing header row");
  if (data.rows == 0) fail_data(line_no, "no measurement rows");
  return data;
}

BatchData parse_batch_data(const std::filesystem::path& path, const AssemblyModel& model) {
  return parse_batch_data_text(read_file(path), model, path.string());
}

DisplayConfig parse_display_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::Parse, path.string() + ": malformed JSON: " + e.what());
  }
  const std::string source = path.string();
  const Fields root(doc, "", source, {"precision"});
  DisplayConfig config;
  if (root.has("precision")) {
    const auto& v = doc.at("precision");
    if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 17) {
      fail(source, "precision", "expected an integer in [1, 17]");
    }
    config.precision = v.get<int>();
  }
  return config;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::Io, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCategory::Io, "failed writing '" + path.string() + "'");
}

}  // namespace inertol
