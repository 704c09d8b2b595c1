#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gca/compare.hpp"
#include "gca/fd.hpp"
#include "gca/io.hpp"

namespace {

using namespace gca;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorKind::Parse, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

VSet parse_vertex_set(const Graph& g, const std::string& s) {
  VSet out = 0;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string id = s.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    int v = g.find_vertex(id);
    require(v >= 0, ErrorKind::Parse, "unknown vertex " + id);
    out |= vset_single(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    require(!tok.empty() &&
                tok.find_first_not_of("0123456789") == std::string::npos,
            ErrorKind::Parse, "bad integer " + tok);
    out.push_back(std::stoi(tok));
  }
  return out;
}

// `v:1,2;w:3,4` = one rank vector per vertex, entries per target block
std::vector<RankVector> parse_dims(const Graph& g, int blocks,
                                   const std::string& s) {
  std::vector<RankVector> dims(g.vertex_count(), RankVector(blocks, 0));
  std::vector<char> seen(g.vertex_count(), 0);
  std::istringstream in(s);
  std::string entry;
  while (std::getline(in, entry, ';')) {
    if (entry.empty()) continue;
    std::size_t colon = entry.find(':');
    require(colon != std::string::npos, ErrorKind::Parse,
            "dims entry " + entry + " needs vertex:ranks");
    int v = g.find_vertex(entry.substr(0, colon));
    require(v >= 0, ErrorKind::Parse, "unknown vertex in dims");
    auto ranks = parse_int_list(entry.substr(colon + 1));
    require(int(ranks.size()) == blocks, ErrorKind::Parse,
            "rank count must match the block count");
    for (int i = 0; i < blocks; ++i) dims[v][i] = ranks[i];
    seen[v] = 1;
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    require(seen[v], ErrorKind::Parse,
            "missing dims for vertex " + g.vertex_id(v));
  return dims;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json cmatrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back({format_double(m(i, j).real()),
                     format_double(m(i, j).imag())});
    rows.push_back(row);
  }
  return rows;
}

int run(int argc, char** argv) {
  CLI::App app{"classification invariants of finite graph C*-algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (corpus scan)");

  std::string file, file2, set_opt, psi_opt, c1, c2, dims_opt, blocks_opt;
  unsigned long long seed = 42;
  int count = 100, max_vertices = 5, max_edges = 8;
  unsigned long long fd_seed = 0;
  std::string monoid_op;

  auto* ideals = app.add_subcommand("ideals", "ideal lattice of a graph");
  ideals->add_option("file", file)->required();

  auto* ktheory = app.add_subcommand("ktheory", "K groups of an ideal");
  ktheory->add_option("file", file)->required();
  ktheory->add_option("--set", set_opt,
                      "hereditary saturated vertex set (default: all)");

  auto* monoid = app.add_subcommand("monoid", "projection monoid queries");
  monoid->add_option("op", monoid_op, "eq")->required();
  monoid->add_option("file", file)->required();
  monoid->add_option("c1", c1)->required();
  monoid->add_option("c2", c2)->required();

  auto* tails = app.add_subcommand("tails", "maximal tails and trichotomy");
  tails->add_option("file", file)->required();

  auto* ext = app.add_subcommand("ext", "Ext groups against a K1 diagram");
  ext->add_option("file", file)->required();
  ext->add_option("--target", file2, "second graph (default: the first)");
  ext->add_option("--psi", psi_opt, "lattice map as comma separated indices");

  auto* compare = app.add_subcommand("compare", "classification verdict");
  compare->add_option("file1", file)->required();
  compare->add_option("file2", file2)->required();

  auto* fd = app.add_subcommand("fd", "finite-dimensional correspondence");
  fd->add_option("file", file)->required();
  fd->add_option("--blocks", blocks_opt, "target block sizes")->required();
  fd->add_option("--dims", dims_opt, "rank vectors, `v:1,2;w:3,4`")
      ->required();
  fd->add_option("--seed", fd_seed, "0 = identity unitaries");

  auto* corpus = app.add_subcommand("corpus", "bucketed invariant digests");
  corpus->add_option("--seed", seed);
  corpus->add_option("--count", count);
  corpus->add_option("--max-vertices", max_vertices);
  corpus->add_option("--max-edges", max_edges);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Json out;
  if (*ideals) {
    std::string text = read_file(file);
    Graph g = parse_graph(text);
    out = report_shell("ideals", text);
    out["graph"] = graph_json(g);
    out["lattice"] = lattice_json(g, IdealLattice::enumerate(g));
  } else if (*ktheory) {
    std::string text = read_file(file);
    Graph g = parse_graph(text);
    VSet w = set_opt.empty() ? g.all_vertices() : parse_vertex_set(g, set_opt);
    out = report_shell("ktheory", text);
    out["graph"] = graph_json(g);
    out["kdata"] = kdata_json(g, k_groups(g, w));
  } else if (*monoid) {
    require(monoid_op == "eq", ErrorKind::Parse,
            "unsupported monoid operation " + monoid_op);
    std::string text = read_file(file);
    Graph g = parse_graph(text);
    MonoidElement e1 = parse_monoid_literal(g, c1);
    MonoidElement e2 = parse_monoid_literal(g, c2);
    out = report_shell("monoid", text);
    out["equal"] = equal_in_P(g, e1, e2);
  } else if (*tails) {
    std::string text = read_file(file);
    Graph g = parse_graph(text);
    IdealLattice lat = IdealLattice::enumerate(g);
    out = report_shell("tails", text);
    out["graph"] = graph_json(g);
    out["tails"] = tails_json(g, lat, maximal_tails(g, lat));
  } else if (*ext) {
    std::string text = read_file(file);
    Graph g = parse_graph(text);
    InvariantBundle a = invariant_bundle(g);
    out = report_shell("ext", text);
    if (file2.empty()) {
      out["ext"] = ext_json(a.ext_self);
    } else {
      std::string text2 = read_file(file2);
      Graph g2 = parse_graph(text2);
      InvariantBundle b = invariant_bundle(g2);
      std::vector<int> psi;
      if (psi_opt.empty()) {
        auto isos = find_lattice_isos(a.lat, b.lat);
        require(!isos.empty(), ErrorKind::NotMonotone,
                "the lattices admit no order isomorphism; pass --psi");
        psi = isos.front();
      } else {
        psi = parse_int_list(psi_opt);
      }
      std::vector<VSet> elements;
      for (int i = 0; i < a.lat.size(); ++i)
        elements.push_back(a.lat.element(i));
      GroupDiagram ypull = pullback_diagram(elements, psi, b.kd.k1);
      out["psi"] = psi;
      out["ext"] = ext_json(ext_groups(cochain_complex(g, a.kd, ypull)));
    }
  } else if (*compare) {
    std::string text = read_file(file);
    std::string text2 = read_file(file2);
    Graph g = parse_graph(text);
    Graph g2 = parse_graph(text2);
    out = report_shell("compare", text + text2);
    out["verdict"] = verdict_json(compare_verdict(g, g2));
  } else if (*fd) {
    std::string text = read_file(file);
    Graph g = parse_graph(text);
    FDTarget target{parse_int_list(blocks_opt)};
    auto dims = parse_dims(g, int(target.block_sizes.size()), dims_opt);
    CorrespondenceFamily fam = lift_monoid_hom_fd(g, target, dims, fd_seed);
    CkReport rep = verify_ck(fam, g);
    out = report_shell("fd", text);
    out["blocks"] = target.block_sizes;
    out["seed"] = fd_seed;
    Json dj = Json::array();
    for (int v = 0; v < g.vertex_count(); ++v)
      dj.push_back({{"vertex", g.vertex_id(v)}, {"ranks", dims[v]}});
    out["dims"] = dj;
    Json uj = Json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!g.is_regular(v)) continue;
      Json vu;
      vu["vertex"] = g.vertex_id(v);
      vu["blocks"] = Json::array();
      for (const auto& m : fam.unitaries[v]) vu["blocks"].push_back(cmatrix_json(m));
      uj.push_back(vu);
    }
    out["unitaries"] = uj;
    out["max_residual"] = format_double(rep.max_residual);
    out["ck_ok"] = rep.ok();
  } else if (*corpus) {
    out = corpus_scan(seed, count, max_vertices, max_edges, threads);
  }

  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
