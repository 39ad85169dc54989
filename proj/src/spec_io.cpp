#include "combstruct/spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace combstruct {

using nlohmann::json;

namespace {

double number_param(const json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number()) {
    throw DomainError(std::string("missing numeric parameter '") + key + "'");
  }
  return params[key].get<double>();
}

unsigned long prime_power_param(const json& params) {
  const double q = number_param(params, "q");
  if (q < 2.0 || q != std::floor(q) || q > 1e9) throw DomainError("q must be an integer >= 2");
  return static_cast<unsigned long>(q);
}

StructureSpec builtin(const std::string& name, const json& params) {
  if (name == "permutations") return StructureSpec::permutations();
  if (name == "mappings") return StructureSpec::mappings();
  if (name == "set_partitions") return StructureSpec::set_partitions();
  if (name == "two_regular_graphs") return StructureSpec::two_regular_graphs();
  if (name == "integer_partitions") return StructureSpec::integer_partitions();
  if (name == "polynomials") return StructureSpec::polynomials(prime_power_param(params));
  if (name == "distinct_partitions") return StructureSpec::distinct_partitions();
  if (name == "distinct_odd_partitions") return StructureSpec::distinct_odd_partitions();
  if (name == "squarefree_polynomials") {
    return StructureSpec::squarefree_polynomials(prime_power_param(params));
  }
  if (name == "esf") return StructureSpec::esf(number_param(params, "kappa"));
  throw DomainError("unknown builtin '" + name + "'");
}

}  // namespace

StructureSpec parse_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("spec must be a JSON object");

  std::optional<Kind> kind;
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) throw DomainError("'kind' must be a string");
    kind = parse_kind(doc["kind"].get<std::string>());
  }

  if (doc.contains("builtin")) {
    if (!doc["builtin"].is_string()) throw DomainError("'builtin' must be a string");
    const json params = doc.value("params", json::object());
    StructureSpec spec = builtin(doc["builtin"].get<std::string>(), params);
    if (kind && *kind != spec.kind()) {
      throw DomainError("builtin '" + spec.name() + "' is a " + std::string(kind_name(spec.kind())));
    }
    return spec;
  }

  if (!doc.contains("m") || !doc["m"].is_array()) throw DomainError("spec needs 'builtin' or an 'm' list");
  if (!kind) throw DomainError("explicit specs need 'kind'");
  std::vector<double> m;
  for (const auto& v : doc["m"]) {
    if (!v.is_number()) throw DomainError("'m' entries must be numbers");
    m.push_back(v.get<double>());
  }
  std::optional<LogClassMeta> meta;
  if (doc.contains("meta")) {
    const json& jm = doc["meta"];
    meta = LogClassMeta{number_param(jm, "kappa"), number_param(jm, "y")};
  }
  return StructureSpec::from_sequence(*kind, std::move(m), doc.value("name", std::string("custom")), meta);
}

StructureSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const StructureSpec& spec) {
  json doc;
  doc["kind"] = std::string(kind_name(spec.kind()));
  switch (spec.family()) {
    case StructureSpec::Family::Explicit:
      doc["name"] = spec.name();
      doc["m"] = spec.explicit_m();
      if (spec.meta()) doc["meta"] = {{"kappa", spec.meta()->kappa}, {"y", spec.meta()->y}};
      break;
    case StructureSpec::Family::Polynomials:
    case StructureSpec::Family::SquarefreePolynomials:
      doc["builtin"] = spec.name();
      doc["params"] = {{"q", static_cast<unsigned long>(spec.parameter())}};
      break;
    case StructureSpec::Family::Esf:
      doc["builtin"] = spec.name();
      doc["params"] = {{"kappa", spec.parameter()}};
      break;
    default:
      doc["builtin"] = spec.name();
      break;
  }
  return doc.dump();
}

std::string spec_hash(const StructureSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : spec_to_json(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace combstruct
