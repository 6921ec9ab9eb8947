#include "carnot/function_registry.hpp"

#include <cmath>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

using nlohmann::json;

std::vector<std::string> param_names(const CanonicalSplit& split) {
  const GroupSpecB& g = split.group();
  std::vector<std::string> names;
  for (std::size_t i = split.k(); i < g.m(); ++i) names.push_back("x" + std::to_string(i + 1));
  for (std::size_t s = 0; s < g.n(); ++s) names.push_back("y" + std::to_string(s + 1));
  return names;
}

std::size_t param_index(const CanonicalSplit& split, const std::string& name) {
  const auto names = param_names(split);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  if (name == "y" && split.group().n() == 1) return names.size() - 1;
  throw Error(Errc::parse_error, "unknown parameter name '" + name + "'");
}

namespace {

const json& field(const json& spec, const char* key) {
  if (!spec.is_object() || !spec.contains(key))
    throw Error(Errc::parse_error, std::string("function spec: missing field '") + key + "'");
  return spec.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(Errc::parse_error, std::string("function spec: ") + what +
                                                         " must be a number");
  return v.get<double>();
}

Vec numbers(const json& v, const char* what) {
  if (!v.is_array()) throw Error(Errc::parse_error, std::string("function spec: ") + what +
                                                        " must be an array");
  Vec out;
  for (const json& e : v) out.push_back(number(e, what));
  return out;
}

struct Term {
  double coef;
  std::vector<int> powers;
};

}  // namespace

GraphFunction make_function(const json& spec, const CanonicalSplit& split, const Box& domain) {
  const std::size_t d = split.param_dim();
  if (domain.dim() != d) throw Error(Errc::dimension_mismatch, "function domain dimension mismatch");
  const std::string type = field(spec, "type").get<std::string>();
  if (type == "constant") {
    const double c = number(field(spec, "value"), "value");
    return GraphFunction::scalar(domain, [c](std::span<const double>) { return c; }, "constant");
  }
  if (type == "coordinate") {
    const std::string name = field(spec, "name").get<std::string>();
    const std::size_t i = param_index(split, name);
    return GraphFunction::scalar(domain, [i](std::span<const double> a) { return a[i]; }, name);
  }
  if (type == "linear") {
    const Vec c = numbers(field(spec, "coefficients"), "coefficients");
    if (c.size() != d)
      throw Error(Errc::parse_error, "linear: coefficient count must equal the parameter count");
    const double off = spec.contains("offset") ? number(spec.at("offset"), "offset") : 0.0;
    return GraphFunction::scalar(
        domain,
        [c, off](std::span<const double> a) {
          double v = off;
          for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * a[i];
          return v;
        },
        "linear");
  }
  if (type == "poly") {
    std::vector<Term> terms;
    for (const json& t : field(spec, "terms")) {
      Term term{number(field(t, "coef"), "coef"), {}};
      for (const json& p : field(t, "powers")) {
        if (!p.is_number_integer() || p.get<int>() < 0)
          throw Error(Errc::parse_error, "poly: powers must be nonnegative integers");
        term.powers.push_back(p.get<int>());
      }
      if (term.powers.size() != d)
        throw Error(Errc::parse_error, "poly: each term needs one power per parameter");
      terms.push_back(std::move(term));
    }
    return GraphFunction::scalar(
        domain,
        [terms](std::span<const double> a) {
          double v = 0.0;
          for (const Term& t : terms) {
            double prod = t.coef;
            for (std::size_t i = 0; i < t.powers.size(); ++i)
              for (int e = 0; e < t.powers[i]; ++e) prod *= a[i];
            v += prod;
          }
          return v;
        },
        "poly");
  }
  if (type == "sqrt_abs") {
    const std::string name = field(spec, "coordinate").get<std::string>();
    const std::size_t i = param_index(split, name);
    return GraphFunction::scalar(
        domain, [i](std::span<const double> a) { return std::sqrt(std::abs(a[i])); },
        "sqrt_abs(" + name + ")");
  }
  if (type == "grid") {
    std::vector<Vec> axes;
    for (const json& ax : field(spec, "axes")) axes.push_back(numbers(ax, "axes"));
    if (axes.size() != d) throw Error(Errc::parse_error, "grid: need one axis per parameter");
    return GraphFunction::grid(std::move(axes), numbers(field(spec, "values"), "values"), 1, "grid");
  }
  throw Error(Errc::parse_error, "unknown function type '" + type + "'");
}

GraphFunction make_vector_function(const json& spec, const CanonicalSplit& split,
                                   const Box& domain) {
  if (spec.is_object()) return make_function(spec, split, domain);
  if (!spec.is_array() || spec.empty())
    throw Error(Errc::parse_error, "vector function: expected an object or a nonempty array");
  std::vector<GraphFunction> parts;
  for (const json& e : spec) parts.push_back(make_function(e, split, domain));
  Box dom = domain;
  for (const GraphFunction& f : parts) {
    if (f.kind() == GraphFunction::Kind::grid) dom = f.domain();
  }
  return GraphFunction::closed_form(
      dom, parts.size(),
      [parts](std::span<const double> a) {
        Vec out;
        for (const GraphFunction& f : parts) out.push_back(f.scalar_at(a));
        return out;
      },
      "vector");
}

bool is_polynomial_spec(const json& spec) {
  if (!spec.is_object() || !spec.contains("type")) return false;
  const std::string t = spec.at("type").get<std::string>();
  return t == "constant" || t == "coordinate" || t == "linear" || t == "poly";
}

GraphFunction constant_function(const CanonicalSplit& split, const Box& domain, double c) {
  return make_function(json{{"type", "constant"}, {"value", c}}, split, domain);
}

GraphFunction coordinate_function(const CanonicalSplit& split, const Box& domain,
                                  const std::string& name) {
  return make_function(json{{"type", "coordinate"}, {"name", name}}, split, domain);
}

}  // namespace carnot
