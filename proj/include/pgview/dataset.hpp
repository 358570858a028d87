#pragma once

#include <cstdint>
#include <string>

#include "pgview/csv.hpp"
#include "pgview/graph.hpp"

namespace pgview {

/// Posts with full reply trees: every Post gets `fanout` Comments at level 1,
/// each Comment below `depth` gets `fanout` children (replyOf points at the
/// parent). Optional Person nodes with random likes edges into the comments.
struct CommentTreeParams {
  int posts = 25;
  int fanout = 2;
  int depth = 10;
  int persons = 0;
  int likes = 0;
  std::uint64_t seed = 1;
};

/// Person chains of length chain_len connected by knows edges, plus `extra`
/// random knows edges between distinct persons.
struct KnowsGraphParams {
  int nodes = 25000;
  int chain_len = 50;
  int extra = 0;
  std::uint64_t seed = 1;
};

GraphSchema comment_tree_schema();
GraphSchema knows_graph_schema();

void gen_comment_tree(Graph& graph, const CommentTreeParams& params);
void gen_knows_graph(Graph& graph, const KnowsGraphParams& params);

/// Writes nodes.csv / edges.csv / schema.csv into dir (created if missing).
DatasetSource write_dataset(const Graph& graph, const std::string& dir);

}  // namespace pgview
