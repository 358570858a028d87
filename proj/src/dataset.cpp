#include "pgview/dataset.hpp"

#include <filesystem>
#include <random>
#include <vector>

namespace pgview {

GraphSchema comment_tree_schema() {
  GraphSchema s;
  s.declare_node_label("Post", "id");
  s.declare_node_label("Comment", "id");
  s.declare_node_label("Person", "id");
  s.declare_edge_label("replyOf");
  s.declare_edge_label("likes");
  return s;
}

GraphSchema knows_graph_schema() {
  GraphSchema s;
  s.declare_node_label("Person", "id");
  s.declare_edge_label("knows");
  return s;
}

void gen_comment_tree(Graph& graph, const CommentTreeParams& params) {
  std::mt19937_64 rng(params.seed);
  std::int64_t comment_seq = 0;
  std::vector<NodeId> all_comments;

  for (int p = 1; p <= params.posts; ++p) {
    NodeId post = graph.create_node(
        "Post", {{"id", PropertyValue(std::int64_t{p})}, {"title", PropertyValue("p" + std::to_string(p))}});
    std::vector<NodeId> level = {post};
    for (int d = 1; d <= params.depth; ++d) {
      std::vector<NodeId> next;
      next.reserve(level.size() * static_cast<std::size_t>(params.fanout));
      for (NodeId parent : level) {
        for (int f = 0; f < params.fanout; ++f) {
          ++comment_seq;
          std::int64_t len = 1 + static_cast<std::int64_t>(rng() % 100);
          NodeId c = graph.create_node(
              "Comment", {{"id", PropertyValue(comment_seq)}, {"len", PropertyValue(len)}});
          graph.create_edge(c, parent, "replyOf", {});
          all_comments.push_back(c);
          next.push_back(c);
        }
      }
      level = std::move(next);
    }
  }

  std::vector<NodeId> persons;
  for (int p = 1; p <= params.persons; ++p) {
    persons.push_back(graph.create_node(
        "Person", {{"id", PropertyValue(std::int64_t{p})}, {"name", PropertyValue("u" + std::to_string(p))}}));
  }
  if (!persons.empty() && !all_comments.empty()) {
    for (int i = 0; i < params.likes; ++i) {
      NodeId person = persons[rng() % persons.size()];
      NodeId comment = all_comments[rng() % all_comments.size()];
      graph.create_edge(person, comment, "likes", {});
    }
  }
}

void gen_knows_graph(Graph& graph, const KnowsGraphParams& params) {
  std::mt19937_64 rng(params.seed);
  std::vector<NodeId> persons;
  persons.reserve(static_cast<std::size_t>(params.nodes));
  for (int p = 1; p <= params.nodes; ++p) {
    persons.push_back(graph.create_node(
        "Person", {{"id", PropertyValue(std::int64_t{p})}, {"name", PropertyValue("u" + std::to_string(p))}}));
  }
  int len = params.chain_len < 1 ? 1 : params.chain_len;
  for (std::size_t i = 0; i + 1 < persons.size(); ++i) {
    if ((i + 1) % static_cast<std::size_t>(len) == 0) continue;  // chain boundary
    graph.create_edge(persons[i], persons[i + 1], "knows", {});
  }
  if (persons.size() > 1) {
    for (int i = 0; i < params.extra; ++i) {
      NodeId a = persons[rng() % persons.size()];
      NodeId b = persons[rng() % persons.size()];
      while (b == a) b = persons[rng() % persons.size()];
      graph.create_edge(a, b, "knows", {});
    }
  }
}

DatasetSource write_dataset(const Graph& graph, const std::string& dir) {
  std::filesystem::create_directories(dir);
  DatasetSource src;
  src.nodes_csv = (std::filesystem::path(dir) / "nodes.csv").string();
  src.edges_csv = (std::filesystem::path(dir) / "edges.csv").string();
  src.schema_csv = (std::filesystem::path(dir) / "schema.csv").string();
  dump_graph_csv(graph, src.nodes_csv, src.edges_csv, src.schema_csv);
  return src;
}

}  // namespace pgview
