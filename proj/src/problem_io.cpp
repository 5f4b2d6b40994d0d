#include "minsum/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace minsum {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

double parse_double(const Line& line, const std::string& tok) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line.number, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(line.number, "trailing characters in number '" + tok + "'");
  return v;
}

int parse_index(const Line& line, const std::string& tok, int n) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line.number, "expected a node index, got '" + tok + "'");
  }
  if (pos != tok.size() || v < 1 || v > n)
    throw ParseError(line.number, "node index '" + tok + "' out of range 1.." +
                                      std::to_string(n));
  return static_cast<int>(v - 1);  // files are 1-based
}

std::map<std::string, double> parse_params(const Line& line, std::size_t first) {
  std::map<std::string, double> params;
  for (std::size_t k = first; k < line.tokens.size(); ++k) {
    const auto& tok = line.tokens[k];
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(line.number, "expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    if (params.count(key))
      throw ParseError(line.number, "duplicate parameter '" + key + "'");
    params[key] = parse_double(line, tok.substr(eq + 1));
  }
  return params;
}

double take_param(const Line& line, std::map<std::string, double>& params,
                  const std::string& key, bool required, double fallback = 0) {
  const auto it = params.find(key);
  if (it == params.end()) {
    if (required)
      throw ParseError(line.number, "missing parameter '" + key + "'");
    return fallback;
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const Line& line, const std::map<std::string, double>& params) {
  if (!params.empty())
    throw ParseError(line.number, "unknown parameter '" + params.begin()->first + "'");
}

}  // namespace

ParsedProblem parse_problem(std::istream& in) {
  const auto lines = tokenize(in);
  if (lines.empty()) throw ParseError(1, "empty problem file");

  std::size_t cursor = 0;
  const Line& header = lines[cursor++];
  if (header.tokens.size() != 3 || header.tokens[0] != "problem" ||
      header.tokens[2] != "v1")
    throw ParseError(header.number, "expected header 'problem <quadratic|general> v1'");
  const std::string kind = header.tokens[1];
  if (kind != "quadratic" && kind != "general")
    throw ParseError(header.number, "unknown problem kind '" + kind + "'");

  if (cursor >= lines.size())
    throw ParseError(header.number, "missing 'n <count>' line");
  const Line& nline = lines[cursor++];
  if (nline.tokens.size() != 2 || nline.tokens[0] != "n")
    throw ParseError(nline.number, "expected 'n <count>'");
  const int n = static_cast<int>(parse_double(nline, nline.tokens[1]));
  if (n < 1) throw ParseError(nline.number, "n must be >= 1");

  if (kind == "quadratic") {
    std::vector<double> diag(n, 0.0), b(n, 0.0);
    std::vector<bool> diag_set(n, false);
    std::map<std::array<int, 2>, double> off;
    std::set<int> b_set;
    for (; cursor < lines.size(); ++cursor) {
      const Line& line = lines[cursor];
      if (line.tokens[0] == "A") {
        if (line.tokens.size() != 4)
          throw ParseError(line.number, "expected 'A i j value'");
        const int i = parse_index(line, line.tokens[1], n);
        const int j = parse_index(line, line.tokens[2], n);
        const double v = parse_double(line, line.tokens[3]);
        if (i > j)
          throw ParseError(line.number,
                           "A entries must satisfy i <= j (symmetric storage); "
                           "found the lower-triangle coordinate");
        if (i == j) {
          if (diag_set[i])
            throw ParseError(line.number, "duplicate diagonal entry for node " +
                                              std::to_string(i + 1));
          diag[i] = v;
          diag_set[i] = true;
        } else {
          if (off.count({i, j}))
            throw ParseError(line.number, "duplicate entry A " +
                                              std::to_string(i + 1) + " " +
                                              std::to_string(j + 1));
          off[{i, j}] = v;
        }
      } else if (line.tokens[0] == "b") {
        if (line.tokens.size() != 3)
          throw ParseError(line.number, "expected 'b i value'");
        const int i = parse_index(line, line.tokens[1], n);
        if (!b_set.insert(i).second)
          throw ParseError(line.number, "duplicate b entry for node " +
                                            std::to_string(i + 1));
        b[i] = parse_double(line, line.tokens[2]);
      } else {
        throw ParseError(line.number, "unknown directive '" + line.tokens[0] +
                                          "' in a quadratic problem");
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!diag_set[i])
        throw ParseError(nline.number, "missing diagonal entry for node " +
                                           std::to_string(i + 1));
      if (!(diag[i] > 0))
        throw ParseError(nline.number, "non-positive diagonal entry for node " +
                                           std::to_string(i + 1));
    }
    std::vector<std::array<int, 2>> edges;
    std::vector<double> values;
    for (const auto& [key, v] : off) {
      edges.push_back(key);
      values.push_back(v);
    }
    return QuadraticProblem::build(Graph::build(n, std::move(edges)),
                                   std::move(diag), std::move(values),
                                   std::move(b));
  }

  // general
  std::vector<ScalarFactor> nodes(n);
  std::vector<bool> node_set(n, false);
  std::map<std::array<int, 2>, EdgeFactor> edge_map;
  for (; cursor < lines.size(); ++cursor) {
    const Line& line = lines[cursor];
    if (line.tokens[0] == "node") {
      if (line.tokens.size() < 3)
        throw ParseError(line.number, "expected 'node i <family> key=value...'");
      const int i = parse_index(line, line.tokens[1], n);
      if (node_set[i])
        throw ParseError(line.number, "duplicate node factor for node " +
                                          std::to_string(i + 1));
      const std::string& fam = line.tokens[2];
      auto params = parse_params(line, 3);
      try {
        if (fam == "quadratic") {
          const double a = take_param(line, params, "a", true);
          const double bb = take_param(line, params, "b", false);
          nodes[i] = ScalarFactor::quadratic(a, bb);
        } else if (fam == "quartic") {
          const double c = take_param(line, params, "c", true);
          const double bb = take_param(line, params, "b", false);
          nodes[i] = ScalarFactor::quartic(c, bb);
        } else if (fam == "logcosh") {
          const double sv = take_param(line, params, "s", true);
          const double c = take_param(line, params, "c", false);
          const double bb = take_param(line, params, "b", false);
          nodes[i] = ScalarFactor::logcosh(sv, c, bb);
        } else {
          throw ParseError(line.number, "unknown node family '" + fam + "'");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& err) {
        throw ParseError(line.number, err.what());
      }
      reject_leftovers(line, params);
      node_set[i] = true;
    } else if (line.tokens[0] == "edge") {
      if (line.tokens.size() < 4)
        throw ParseError(line.number, "expected 'edge i j <family> key=value...'");
      const int i = parse_index(line, line.tokens[1], n);
      const int j = parse_index(line, line.tokens[2], n);
      if (i >= j)
        throw ParseError(line.number, "edges must satisfy i < j");
      if (edge_map.count({i, j}))
        throw ParseError(line.number, "duplicate edge " + std::to_string(i + 1) +
                                          " " + std::to_string(j + 1));
      const std::string& fam = line.tokens[3];
      auto params = parse_params(line, 4);
      if (fam == "bilinear") {
        const double a = take_param(line, params, "a", true);
        edge_map.emplace(std::array<int, 2>{i, j}, EdgeFactor::bilinear(a));
      } else {
        throw ParseError(line.number, "unknown edge family '" + fam + "'");
      }
      reject_leftovers(line, params);
    } else {
      throw ParseError(line.number, "unknown directive '" + line.tokens[0] +
                                        "' in a general problem");
    }
  }
  for (int i = 0; i < n; ++i)
    if (!node_set[i])
      throw ParseError(nline.number,
                       "missing node factor for node " + std::to_string(i + 1));
  std::vector<std::array<int, 2>> edges;
  std::vector<EdgeFactor> factors;
  for (const auto& [key, f] : edge_map) {
    edges.push_back(key);
    factors.push_back(f);
  }
  return PairwiseObjective::build(Graph::build(n, std::move(edges)),
                                  std::move(nodes), std::move(factors));
}

ParsedProblem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file '" + path + "'");
  return parse_problem(in);
}

void write_problem(std::ostream& os, const QuadraticProblem& q) {
  const auto flags = os.flags();
  os.precision(17);
  os << "problem quadratic v1\n";
  os << "n " << q.n() << "\n";
  for (int i = 0; i < q.n(); ++i)
    os << "A " << i + 1 << " " << i + 1 << " " << q.diag[i] << "\n";
  for (std::size_t e = 0; e < q.graph.edge_count(); ++e)
    os << "A " << q.graph.edges[e][0] + 1 << " " << q.graph.edges[e][1] + 1
       << " " << q.offdiag[e] << "\n";
  for (int i = 0; i < q.n(); ++i)
    if (q.b[i] != 0.0) os << "b " << i + 1 << " " << q.b[i] << "\n";
  os.flags(flags);
}

void write_problem(std::ostream& os, const PairwiseObjective& obj) {
  const auto flags = os.flags();
  os.precision(17);
  os << "problem general v1\n";
  os << "n " << obj.graph.n << "\n";
  for (int i = 0; i < obj.graph.n; ++i) {
    const auto& f = obj.node_factors[i];
    switch (f.family) {
      case NodeFamily::quadratic:
        os << "node " << i + 1 << " quadratic a=" << f.a << " b=" << f.b << "\n";
        break;
      case NodeFamily::quartic:
        os << "node " << i + 1 << " quartic c=" << f.c << " b=" << f.b << "\n";
        break;
      case NodeFamily::logcosh:
        os << "node " << i + 1 << " logcosh s=" << f.s << " c=" << f.c
           << " b=" << f.b << "\n";
        break;
      case NodeFamily::custom:
        throw Error("custom node factors are not serialisable");
    }
  }
  for (std::size_t e = 0; e < obj.graph.edge_count(); ++e) {
    const auto& f = obj.edge_factors[e];
    if (f.family != EdgeFamily::bilinear)
      throw Error("custom edge factors are not serialisable");
    os << "edge " << obj.graph.edges[e][0] + 1 << " " << obj.graph.edges[e][1] + 1
       << " bilinear a=" << f.a << "\n";
  }
  os.flags(flags);
}

void write_certificate(std::ostream& os, const DominanceCertificate& cert) {
  const auto flags = os.flags();
  os.precision(17);
  os << "certificate v1\n";
  os << "n " << cert.w.size() << "\n";
  os << "lambda " << cert.lambda << "\n";
  os << "kind "
     << (cert.kind == DominanceCertificate::Kind::exact_quadratic
             ? "exact_quadratic"
             : "sampled")
     << "\n";
  os << "samples " << cert.sample_count << "\n";
  for (std::size_t i = 0; i < cert.w.size(); ++i)
    os << "w " << i + 1 << " " << cert.w[i] << "\n";
  os.flags(flags);
}

DominanceCertificate parse_certificate(std::istream& in) {
  const auto lines = tokenize(in);
  if (lines.empty() || lines[0].tokens != std::vector<std::string>{"certificate", "v1"})
    throw ParseError(lines.empty() ? 1 : lines[0].number,
                     "expected header 'certificate v1'");
  DominanceCertificate cert;
  int n = -1;
  std::vector<bool> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const auto& t = line.tokens;
    if (t[0] == "n" && t.size() == 2) {
      n = static_cast<int>(parse_double(line, t[1]));
      if (n < 1) throw ParseError(line.number, "n must be >= 1");
      cert.w.assign(n, 0.0);
      seen.assign(n, false);
    } else if (t[0] == "lambda" && t.size() == 2) {
      cert.lambda = parse_double(line, t[1]);
    } else if (t[0] == "kind" && t.size() == 2) {
      if (t[1] == "exact_quadratic")
        cert.kind = DominanceCertificate::Kind::exact_quadratic;
      else if (t[1] == "sampled")
        cert.kind = DominanceCertificate::Kind::sampled;
      else
        throw ParseError(line.number, "unknown certificate kind '" + t[1] + "'");
    } else if (t[0] == "samples" && t.size() == 2) {
      cert.sample_count = static_cast<long>(parse_double(line, t[1]));
    } else if (t[0] == "w" && t.size() == 3) {
      if (n < 0) throw ParseError(line.number, "'w' before 'n'");
      const int i = parse_index(line, t[1], n);
      const double v = parse_double(line, t[2]);
      if (!(v > 0)) throw ParseError(line.number, "w entries must be positive");
      if (seen[i]) throw ParseError(line.number, "duplicate w entry");
      cert.w[i] = v;
      seen[i] = true;
    } else {
      throw ParseError(line.number, "unknown certificate directive");
    }
  }
  if (n < 0) throw ParseError(1, "certificate without 'n'");
  for (int i = 0; i < n; ++i)
    if (!seen[i])
      throw ParseError(1, "certificate missing w for node " + std::to_string(i + 1));
  if (!(cert.lambda >= 0 && cert.lambda < 1))
    throw ParseError(1, "certificate lambda must lie in [0, 1)");
  return cert;
}

DominanceCertificate parse_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open certificate file '" + path + "'");
  return parse_certificate(in);
}

namespace {

QuadraticProblem finish_instance(int n, std::set<std::array<int, 2>> edge_set,
                                 double lambda_target, Rng& rng) {
  std::vector<std::array<int, 2>> edges(edge_set.begin(), edge_set.end());
  std::vector<double> values(edges.size());
  for (auto& v : values) {
    v = rng.uniform(0.1, 1.0);
    if (rng.uniform() < 0.5) v = -v;
  }
  Graph g = Graph::build(n, edges);
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int e : g.adj_edge[i]) row += std::fabs(values[e]);
    diag[i] = row > 0 ? row / lambda_target : 1.0;
  }
  std::vector<double> b(n);
  for (auto& v : b) v = rng.uniform(-1.0, 1.0);
  return QuadraticProblem::build(std::move(g), std::move(diag),
                                 std::move(values), std::move(b));
}

}  // namespace

QuadraticProblem generate_random_sdd(int n, int degree, double lambda_target,
                                     std::uint64_t seed) {
  if (n < 2) throw Error("generate_random_sdd: n must be >= 2");
  if (degree < 1 || degree >= n)
    throw Error("generate_random_sdd: need 1 <= degree < n");
  if (!(lambda_target > 0 && lambda_target < 1))
    throw Error("generate_random_sdd: lambda_target must lie in (0, 1)");
  Rng rng(seed);

  // regular-ish: chords on a randomly permuted ring; degree == 1 becomes a
  // matching
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(0, i)]);

  std::set<std::array<int, 2>> edge_set;
  const auto add = [&](int a, int b2) {
    if (a == b2) return;
    edge_set.insert({std::min(a, b2), std::max(a, b2)});
  };
  if (degree == 1) {
    for (int i = 0; i + 1 < n; i += 2) add(perm[i], perm[i + 1]);
    if (n % 2 == 1) add(perm[n - 1], perm[0]);
  } else {
    const int chords = degree / 2;
    for (int k = 1; k <= chords; ++k)
      for (int i = 0; i < n; ++i) add(perm[i], perm[(i + k) % n]);
    if (degree % 2 == 1 && n % 2 == 0)
      for (int i = 0; i < n / 2; ++i) add(perm[i], perm[i + n / 2]);
  }
  return finish_instance(n, std::move(edge_set), lambda_target, rng);
}

QuadraticProblem generate_tree_sdd(int n, double lambda_target,
                                   std::uint64_t seed) {
  if (n < 2) throw Error("generate_tree_sdd: n must be >= 2");
  if (!(lambda_target > 0 && lambda_target < 1))
    throw Error("generate_tree_sdd: lambda_target must lie in (0, 1)");
  Rng rng(seed);
  std::set<std::array<int, 2>> edge_set;
  for (int v = 1; v < n; ++v) {
    const int p = rng.uniform_int(0, v - 1);
    edge_set.insert({p, v});
  }
  return finish_instance(n, std::move(edge_set), lambda_target, rng);
}

QuadraticProblem generate_loopy_sdd(int n, int extra_edges,
                                    double lambda_target, std::uint64_t seed) {
  if (n < 3) throw Error("generate_loopy_sdd: n must be >= 3");
  if (!(lambda_target > 0 && lambda_target < 1))
    throw Error("generate_loopy_sdd: lambda_target must lie in (0, 1)");
  Rng rng(seed);
  std::set<std::array<int, 2>> edge_set;
  for (int v = 1; v < n; ++v) {
    const int p = rng.uniform_int(0, v - 1);
    edge_set.insert({p, v});
  }
  int added = 0, attempts = 0;
  while (added < extra_edges && attempts < 50 * extra_edges + 100) {
    ++attempts;
    const int a = rng.uniform_int(0, n - 1);
    const int b2 = rng.uniform_int(0, n - 1);
    if (a == b2) continue;
    if (edge_set.insert({std::min(a, b2), std::max(a, b2)}).second) ++added;
  }
  return finish_instance(n, std::move(edge_set), lambda_target, rng);
}

}  // namespace minsum
