#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gca/common.hpp"
#include "gca/compare.hpp"
#include "gca/graph.hpp"
#include "gca/ktheory.hpp"
#include "gca/lattice.hpp"
#include "gca/monoid.hpp"

namespace gca {

using Json = nlohmann::ordered_json;

inline bool valid_id(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

/// Line-oriented graph grammar: `vertex <id>`, `edge <id> <src> <rng>`,
/// blank lines, and `#` comments.
inline Graph parse_graph(const std::string& text) {
  GraphDescription desc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> declared;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;
    auto where = " at line " + std::to_string(lineno);
    if (head == "vertex") {
      std::string id, rest;
      require(bool(ls >> id), ErrorKind::Parse,
              "vertex needs an identifier" + where);
      require(valid_id(id), ErrorKind::Parse, "bad identifier " + id + where);
      require(!(ls >> rest), ErrorKind::Parse, "trailing tokens" + where);
      desc.vertices.push_back(id);
      declared.push_back(id);
    } else if (head == "edge") {
      std::string id, src, rng, rest;
      require(bool(ls >> id >> src >> rng), ErrorKind::Parse,
              "edge needs id, source and range" + where);
      for (const auto& t : {id, src, rng})
        require(valid_id(t), ErrorKind::Parse, "bad identifier " + t + where);
      require(!(ls >> rest), ErrorKind::Parse, "trailing tokens" + where);
      for (const auto& v : {src, rng})
        require(std::find(declared.begin(), declared.end(), v) !=
                    declared.end(),
                ErrorKind::Parse,
                "vertex " + v + " used before declaration" + where);
      desc.edges.push_back({id, src, rng});
    } else {
      fail(ErrorKind::Parse, "unknown directive " + head + where);
    }
  }
  return Graph::validate(desc);
}

inline std::string serialize_graph(const Graph& g) {
  std::string out;
  for (int v = 0; v < g.vertex_count(); ++v)
    out += "vertex " + g.vertex_id(v) + "\n";
  for (int e = 0; e < g.edge_count(); ++e)
    out += "edge " + g.edge_id(e) + " " + g.vertex_id(g.src(e)) + " " +
           g.vertex_id(g.rng(e)) + "\n";
  return out;
}

/// Monoid element literals: `v1:2,v3:1`; the literal `0` is the zero
/// element.
inline MonoidElement parse_monoid_literal(const Graph& g,
                                          const std::string& s) {
  MonoidElement c = zero_element(g);
  if (s == "0") return c;
  require(!s.empty(), ErrorKind::Parse, "empty monoid literal");
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string term =
        s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    std::size_t colon = term.find(':');
    require(colon != std::string::npos, ErrorKind::Parse,
            "monoid term " + term + " needs vertex:coefficient");
    std::string id = term.substr(0, colon);
    std::string coeff = term.substr(colon + 1);
    int v = g.find_vertex(id);
    require(v >= 0, ErrorKind::Parse, "unknown vertex " + id);
    require(!coeff.empty() &&
                coeff.find_first_not_of("0123456789") == std::string::npos,
            ErrorKind::Parse, "bad coefficient " + coeff);
    c[v] += Int(coeff);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return c;
}

/// FNV-1a digest of the raw input, for report provenance.
inline std::string input_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

inline Json group_json(const FGAbelianGroup& g) {
  Json j;
  j["rank"] = g.free_rank();
  Json torsion = Json::array();
  for (const Int& d : g.torsion()) torsion.push_back(d.str());
  j["torsion"] = torsion;
  j["structure"] = g.structure_string();
  return j;
}

inline Json vset_json(const Graph& g, VSet s) {
  Json j = Json::array();
  for (int v = 0; v < g.vertex_count(); ++v)
    if (vset_contains(s, v)) j.push_back(g.vertex_id(v));
  return j;
}

inline Json graph_json(const Graph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (int v = 0; v < g.vertex_count(); ++v)
    j["vertices"].push_back(g.vertex_id(v));
  j["edges"] = Json::array();
  for (int e = 0; e < g.edge_count(); ++e)
    j["edges"].push_back({{"id", g.edge_id(e)},
                          {"src", g.vertex_id(g.src(e))},
                          {"rng", g.vertex_id(g.rng(e))}});
  return j;
}

inline Json report_shell(const std::string& kind, const std::string& input) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["report"] = kind;
  j["input_digest"] = input_digest(input);
  return j;
}

inline Json lattice_json(const Graph& g, const IdealLattice& lat) {
  Json j;
  j["size"] = lat.size();
  j["elements"] = Json::array();
  for (int i = 0; i < lat.size(); ++i)
    j["elements"].push_back(vset_json(g, lat.element(i)));
  j["join_irreducibles"] = Json::array();
  for (VSet h : lat.join_irreducibles(g))
    j["join_irreducibles"].push_back(vset_json(g, h));
  return j;
}

inline Json kdata_json(const Graph& g, const KData& kd) {
  Json j;
  j["set"] = vset_json(g, kd.w);
  j["k0"] = group_json(kd.k0);
  j["k1"] = group_json(kd.k1);
  Json basis = Json::array();
  for (int c = 0; c < kd.k1_basis.cols(); ++c) {
    Json col = Json::array();
    for (int r = 0; r < kd.k1_basis.rows(); ++r)
      col.push_back(kd.k1_basis(r, c).str());
    basis.push_back(col);
  }
  j["k1_basis"] = basis;
  return j;
}

inline Json tails_json(const Graph& g, const IdealLattice& lat,
                       const std::vector<MaximalTail>& tails) {
  Json j = Json::array();
  for (const auto& t : tails) {
    Json tj;
    tj["members"] = vset_json(g, t.members);
    tj["kind"] = tail_kind_name(t.kind);
    CrosscheckReport r = ktheory_tail_crosscheck(g, lat, t);
    tj["crosscheck"] = {{"h", vset_json(g, r.h)},
                        {"h2", vset_json(g, r.h2)},
                        {"af_pattern", r.af_pattern},
                        {"circle_pattern", r.circle_pattern},
                        {"k0_sub", group_json(r.sq.k0_sub)},
                        {"k1_sub_rank", r.sq.k1_rank}};
    j.push_back(tj);
  }
  return j;
}

inline Json ext_json(const ExtGroups& e) {
  Json j;
  j["ext0"] = group_json(e.ext0);
  j["ext1"] = group_json(e.ext1);
  j["ext2"] = group_json(e.ext2);
  return j;
}

inline Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

inline Json verdict_json(const Verdict& v) {
  Json j;
  j["conclusion"] = conclusion_name(v.conclusion);
  j["pi_proxy"] = v.pi_proxy;
  j["pi_proxy_definition"] =
      "every maximal tail of both graphs is purely infinite simple";
  j["tau_matched"] = v.tau_matched;
  j["psi_results"] = Json::array();
  for (const auto& pr : v.psi_results) {
    Json p;
    p["psi"] = pr.psi;
    p["tau_ok"] = pr.tau_ok;
    if (pr.offending_tail >= 0) p["offending_tail"] = pr.offending_tail;
    auto morphisms = [](const std::vector<DiagramMorphism>& ms) {
      Json out = Json::array();
      for (const auto& m : ms) {
        Json comps = Json::array();
        for (const auto& c : m.components) comps.push_back(matrix_json(c));
        out.push_back(comps);
      }
      return out;
    };
    p["phi1"] = morphisms(pr.phi1.isos);
    p["phi0"] = morphisms(pr.phi0.isos);
    p["phi0_unconfirmed"] = morphisms(pr.phi0.unconfirmed);
    j["psi_results"].push_back(p);
  }
  if (v.winning_psi >= 0) j["winning_psi"] = v.winning_psi;
  if (v.ext2) j["ext2_obstruction_group"] = group_json(*v.ext2);
  return j;
}

/// Seeded multigraph generator shared by the corpus scan.
inline Graph random_corpus_graph(std::mt19937_64& rng, int max_vertices,
                                 int max_edges) {
  std::uniform_int_distribution<int> nv(1, max_vertices);
  int n = nv(rng);
  std::uniform_int_distribution<int> ne(0, max_edges);
  std::uniform_int_distribution<int> pick(0, n - 1);
  GraphDescription desc;
  for (int v = 0; v < n; ++v) desc.vertices.push_back("v" + std::to_string(v));
  int m = ne(rng);
  for (int e = 0; e < m; ++e) {
    int s = pick(rng), r = pick(rng);
    desc.edges.push_back({"e" + std::to_string(e), "v" + std::to_string(s),
                          "v" + std::to_string(r)});
  }
  return Graph::validate(desc);
}

/// Relabeling-invariant invariant digest: lattice order profile plus the
/// multiset of per-node K group shapes and the multiset of tail kinds.
/// Equal digests are necessary, not sufficient, for isomorphic invariants.
inline std::string invariant_digest(const Graph& g) {
  IdealLattice lat = IdealLattice::enumerate(g);
  std::vector<std::string> nodes;
  for (int i = 0; i < lat.size(); ++i) {
    int down = 0, up = 0;
    for (int j = 0; j < lat.size(); ++j) {
      if (IdealLattice::leq(lat.element(j), lat.element(i))) ++down;
      if (IdealLattice::leq(lat.element(i), lat.element(j))) ++up;
    }
    KData kd = k_groups(g, lat.element(i));
    nodes.push_back(std::to_string(down) + "<" + std::to_string(up) + "|" +
                    kd.k0.structure_string() + "|" +
                    kd.k1.structure_string());
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<std::string> kinds;
  for (const auto& t : maximal_tails(g, lat))
    kinds.push_back(tail_kind_name(t.kind));
  std::sort(kinds.begin(), kinds.end());
  std::string d = "L" + std::to_string(lat.size()) + ";";
  for (const auto& s : nodes) d += s + ";";
  d += "T:";
  for (const auto& s : kinds) d += s + ",";
  return d;
}

inline Json corpus_scan(unsigned long long seed, int count, int max_vertices,
                        int max_edges, int threads = 1) {
  require(max_vertices >= 1 && max_vertices <= lattice_vertex_bound(),
          ErrorKind::TooLarge, "corpus bounds exceed the enumeration limit");
  std::mt19937_64 rng(seed);
  std::vector<Graph> graphs;
  for (int i = 0; i < count; ++i)
    graphs.push_back(random_corpus_graph(rng, max_vertices, max_edges));

  // per-graph digests are independent; the merge below is canonical
  std::vector<std::string> digests(count);
  threads = std::max(1, threads);
  if (threads == 1 || count < 2) {
    for (int i = 0; i < count; ++i) digests[i] = invariant_digest(graphs[i]);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++)
          digests[i] = invariant_digest(graphs[i]);
      });
    for (auto& th : pool) th.join();
  }

  std::map<std::string, std::vector<int>> buckets;
  for (int i = 0; i < count; ++i) buckets[digests[i]].push_back(i);

  Json j;
  j["tool_version"] = kToolVersion;
  j["report"] = "corpus";
  j["seed"] = seed;
  j["count"] = count;
  j["max_vertices"] = max_vertices;
  j["max_edges"] = max_edges;
  j["buckets"] = Json::array();
  for (const auto& [digest, members] : buckets) {
    Json b;
    b["digest"] = digest;
    b["graphs"] = Json::array();
    for (int i : members) {
      Json gj;
      gj["index"] = i;
      gj["graph"] = graph_json(graphs[i]);
      b["graphs"].push_back(gj);
    }
    Json pairs = Json::array();
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t c = a + 1; c < members.size(); ++c)
        pairs.push_back({members[a], members[c]});
    b["flagged_pairs"] = pairs;
    j["buckets"].push_back(b);
  }
  return j;
}

}  // namespace gca
