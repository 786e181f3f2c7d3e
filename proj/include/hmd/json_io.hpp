#ifndef HMD_JSON_IO_HPP
#define HMD_JSON_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hmd/hypergraph.hpp"
#include "hmd/types.hpp"

namespace hmd {

// A hypergraph plus the external string labels of its vertices. Labels exist
// only at the I/O boundary; the library works with dense integer ids.
struct GraphDoc {
  Hypergraph graph;
  std::vector<std::string> labels;  // size n, defaults to "0".."n-1"

  Index resolve(const std::string& label) const;
  std::vector<std::string> label_set(const VertexSet& set) const;
};

// Accepted format:
//   {"n": int,
//    "edges": [{"vertices": [int], "w": float, "beta0": float,
//               "beta": {"<vid>": float}}],
//    "labels": ["a", ...]}                      (optional)
// "beta" defaults to empty; a missing "beta0" defaults to 1 - sum(beta).
GraphDoc parse_graph_json(const std::string& text);

// {"values": [float, ...]}
DensityVector parse_vector_json(const std::string& text);

// Reads a file, or stdin when the path is "-".
std::string slurp(const std::string& path);

GraphDoc load_graph(const std::string& path);
DensityVector load_vector(const std::string& path);

}  // namespace hmd

#endif
