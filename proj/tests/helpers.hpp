#pragma once

#include <string>

#include "pgview/database.hpp"
#include "pgview/graph.hpp"
#include "pgview/parser.hpp"
#include "pgview/schema.hpp"

namespace pgtest {

inline pgview::GraphSchema social_schema() {
  pgview::GraphSchema s;
  s.declare_node_label("Post", "id");
  s.declare_node_label("Comment", "id");
  s.declare_node_label("Person", "id");
  s.declare_edge_label("replyOf");
  s.declare_edge_label("likes");
  s.declare_edge_label("knows");
  return s;
}

inline pgview::NodeId add_post(pgview::Graph& g, std::int64_t id) {
  return g.create_node("Post", {{"id", pgview::PropertyValue(id)}});
}
inline pgview::NodeId add_comment(pgview::Graph& g, std::int64_t id) {
  return g.create_node("Comment", {{"id", pgview::PropertyValue(id)}});
}
inline pgview::NodeId add_person(pgview::Graph& g, std::int64_t id) {
  return g.create_node("Person", {{"id", pgview::PropertyValue(id)}});
}

/// p1 <- c1 <- c2 <- ... <- cn (replyOf edges pointing rootward).
struct ReplyChain {
  pgview::NodeId post = 0;
  std::vector<pgview::NodeId> comments;
  std::vector<pgview::EdgeId> edges;  // edges[i] = comments[i] -> parent
};

inline ReplyChain make_reply_chain(pgview::Graph& g, int comments, std::int64_t post_id = 1,
                                   std::int64_t first_comment_id = 1) {
  ReplyChain chain;
  chain.post = add_post(g, post_id);
  pgview::NodeId parent = chain.post;
  for (int i = 0; i < comments; ++i) {
    pgview::NodeId c = add_comment(g, first_comment_id + i);
    chain.edges.push_back(g.create_edge(c, parent, "replyOf", {}));
    chain.comments.push_back(c);
    parent = c;
  }
  return chain;
}

inline pgview::ViewDefinition view_def(const std::string& text) {
  auto stmt = pgview::parse(text);
  return std::get<pgview::CreateViewStatement>(stmt.node).def;
}

inline const char* kRootPostView =
    "CREATE VIEW ROOT_POST AS ( CONSTRUCT (c)-[:ROOT_POST]->(p) "
    "MATCH (c:Comment)-[:replyOf*1..]->(p:Post) )";

}  // namespace pgtest
