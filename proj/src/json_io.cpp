#include "hmd/json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace hmd {

using nlohmann::json;

Index GraphDoc::resolve(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<Index>(i);
  throw Error(ErrorCode::ParseError, "unknown vertex label '" + label + "'");
}

std::vector<std::string> GraphDoc::label_set(const VertexSet& set) const {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (Index u : set) out.push_back(labels[u]);
  return out;
}

GraphDoc parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    const Index n = doc.at("n").get<Index>();
    std::vector<Edge> edges;
    for (const json& je : doc.at("edges")) {
      Edge e;
      e.vertices = je.at("vertices").get<VertexSet>();
      e.weight = je.value("w", 1.0);
      Real beta_sum = 0.0;
      if (je.contains("beta")) {
        for (const auto& [key, value] : je.at("beta").items()) {
          const Index v = static_cast<Index>(std::stol(key));
          const Real b = value.get<Real>();
          e.beta.emplace_back(v, b);
          beta_sum += b;
        }
      }
      e.beta0 = je.contains("beta0") ? je.at("beta0").get<Real>() : 1.0 - beta_sum;
      edges.push_back(std::move(e));
    }

    GraphDoc out{Hypergraph(n, std::move(edges)), {}};
    if (doc.contains("labels")) {
      out.labels = doc.at("labels").get<std::vector<std::string>>();
      if (static_cast<Index>(out.labels.size()) != n)
        throw Error(ErrorCode::ParseError, "labels must have length n");
    } else {
      for (Index u = 0; u < n; ++u) out.labels.push_back(std::to_string(u));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "beta keys must be integer vertex ids");
  }
}

DensityVector parse_vector_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const auto values = doc.at("values").get<std::vector<Real>>();
    DensityVector f(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) f[i] = values[i];
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    buffer << in.rdbuf();
  }
  return buffer.str();
}

GraphDoc load_graph(const std::string& path) { return parse_graph_json(slurp(path)); }

DensityVector load_vector(const std::string& path) { return parse_vector_json(slurp(path)); }

}  // namespace hmd
