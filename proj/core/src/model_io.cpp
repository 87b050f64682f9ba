#include "rbv/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rbv {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Line-counting reader so parse errors can cite a location.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw ModelParseError("cannot open model file: " + path);
  }

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line))
      throw ModelParseError(path_ + ":" + std::to_string(line_no_ + 1) +
                            ": unexpected end of file, expected " + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ModelParseError(path_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::string path_;
  std::ifstream in_;
  int line_no_ = 0;
};

std::vector<long long> parse_int_row(LineReader& r, const std::string& line,
                                     std::size_t expected, const std::string& section) {
  std::istringstream is(line);
  std::vector<long long> out;
  long long v;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (is.clear(), is >> rest)
    r.fail(section + ": not an integer: '" + rest + "'");
  if (out.size() != expected)
    r.fail(section + ": expected " + std::to_string(expected) + " values, found " +
           std::to_string(out.size()));
  return out;
}

std::vector<double> parse_real_row(LineReader& r, const std::string& line,
                                   std::size_t expected, const std::string& section) {
  std::istringstream is(line);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (out.size() != expected)
    r.fail(section + ": expected " + std::to_string(expected) + " values, found " +
           std::to_string(out.size()));
  return out;
}

void expect_section(LineReader& r, const std::string& line, const std::string& name,
                    std::vector<long long>& dims) {
  std::istringstream is(line);
  std::string got;
  is >> got;
  if (got != name) r.fail("expected section '" + name + "', found '" + got + "'");
  dims.clear();
  long long d;
  while (is >> d) dims.push_back(d);
}

std::int16_t check_i16(LineReader& r, long long v, const std::string& section,
                       std::size_t index) {
  if (v < -32768 || v > 32767)
    r.fail(section + ": value " + std::to_string(v) + " at index " + std::to_string(index) +
           " exceeds the signed 16-bit range");
  return static_cast<std::int16_t>(v);
}

void write_int_vector(std::ostream& os, const std::string& name,
                      const std::vector<std::int16_t>& v) {
  os << name << ' ' << v.size() << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i];
  }
  os << '\n';
}

void write_int_matrix(std::ostream& os, const std::string& name,
                      const std::vector<std::int16_t>& v, std::size_t rows, std::size_t cols) {
  os << name << ' ' << rows << ' ' << cols << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) os << ' ';
      os << v[r * cols + c];
    }
    os << '\n';
  }
}

}  // namespace

void export_lognnet(const QuantizedModel& q, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  const Topology& t = q.topology;
  out << "LOGNNET1\n";
  out << "topology " << t.s << ' ' << t.p << ' ' << t.m << ' ' << t.n << '\n';
  out << "chaos " << q.chaos.k << ' ' << q.chaos.d << ' ' << q.chaos.l << ' ' << q.chaos.c
      << '\n';
  out << "scale " << q.scale_factor << '\n';
  write_int_vector(out, "minS", q.q_min_s);
  write_int_vector(out, "maxS", q.q_max_s);
  write_int_vector(out, "meanS", q.q_mean10);
  write_int_matrix(out, "W1", q.q_w1, static_cast<std::size_t>(t.p) + 1,
                   static_cast<std::size_t>(t.m) + 1);
  write_int_matrix(out, "W2", q.q_w2, static_cast<std::size_t>(t.m) + 1,
                   static_cast<std::size_t>(t.n) + 1);
}

QuantizedModel import_lognnet(const std::string& path) {
  LineReader r(path);
  std::string line = r.require("magic");
  if (line != "LOGNNET1") r.fail("bad magic '" + line + "', expected LOGNNET1");

  QuantizedModel q;
  std::vector<long long> dims;
  expect_section(r, r.require("topology"), "topology", dims);
  if (dims.size() != 4) r.fail("topology needs 4 integers");
  q.topology = Topology{static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                        static_cast<int>(dims[2]), static_cast<int>(dims[3])};
  validate(q.topology);
  expect_section(r, r.require("chaos"), "chaos", dims);
  if (dims.size() != 4) r.fail("chaos needs 4 integers");
  q.chaos = ChaosParams{dims[0], dims[1], dims[2], dims[3]};
  if (q.chaos.l <= 0) r.fail("chaos modulus must be positive");
  expect_section(r, r.require("scale"), "scale", dims);
  if (dims.size() != 1 || dims[0] <= 0) r.fail("scale needs one positive integer");
  q.scale_factor = static_cast<std::int32_t>(dims[0]);

  const auto np = static_cast<std::size_t>(q.topology.p);
  auto read_vector = [&](const std::string& name, std::vector<std::int16_t>& dst) {
    expect_section(r, r.require(name.c_str()), name, dims);
    if (dims.size() != 1) r.fail(name + " header needs a count");
    if (static_cast<std::size_t>(dims[0]) != np)
      r.fail(name + ": expected " + std::to_string(np) + " entries, header says " +
             std::to_string(dims[0]));
    const auto row = parse_int_row(r, r.require("vector row"), np, name);
    dst.resize(np);
    for (std::size_t i = 0; i < np; ++i) dst[i] = check_i16(r, row[i], name, i);
  };
  read_vector("minS", q.q_min_s);
  read_vector("maxS", q.q_max_s);
  read_vector("meanS", q.q_mean10);

  auto read_matrix = [&](const std::string& name, std::vector<std::int16_t>& dst,
                         std::size_t rows, std::size_t cols) {
    expect_section(r, r.require(name.c_str()), name, dims);
    if (dims.size() != 2) r.fail(name + " header needs rows and cols");
    if (static_cast<std::size_t>(dims[0]) != rows ||
        static_cast<std::size_t>(dims[1]) != cols)
      r.fail(name + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
             ", header says " + std::to_string(dims[0]) + "x" + std::to_string(dims[1]));
    dst.resize(rows * cols);
    for (std::size_t row_i = 0; row_i < rows; ++row_i) {
      const auto row = parse_int_row(r, r.require("matrix row"), cols, name);
      for (std::size_t c = 0; c < cols; ++c)
        dst[row_i * cols + c] = check_i16(r, row[c], name, row_i * cols + c);
    }
  };
  read_matrix("W1", q.q_w1, static_cast<std::size_t>(q.topology.p) + 1,
              static_cast<std::size_t>(q.topology.m) + 1);
  read_matrix("W2", q.q_w2, static_cast<std::size_t>(q.topology.m) + 1,
              static_cast<std::size_t>(q.topology.n) + 1);
  return q;
}

void export_lognnet_float(const LogNNetModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  const Topology& t = m.topology;
  out << "LOGNNETF1\n";
  out << "topology " << t.s << ' ' << t.p << ' ' << t.m << ' ' << t.n << '\n';
  out << "chaos " << m.chaos.k << ' ' << m.chaos.d << ' ' << m.chaos.l << ' ' << m.chaos.c
      << '\n';
  auto write_real_vector = [&](const std::string& name, const std::vector<double>& v) {
    out << name << ' ' << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << fmt(v[i]);
    }
    out << '\n';
  };
  write_real_vector("minS", m.coeffs.min_s);
  write_real_vector("maxS", m.coeffs.max_s);
  write_real_vector("meanS", m.coeffs.mean10);
  auto write_real_matrix = [&](const std::string& name, const Matrix& mat) {
    out << name << ' ' << mat.rows << ' ' << mat.cols << '\n';
    for (std::size_t r = 0; r < mat.rows; ++r) {
      for (std::size_t c = 0; c < mat.cols; ++c) {
        if (c) out << ' ';
        out << fmt(mat.at(r, c));
      }
      out << '\n';
    }
  };
  write_real_matrix("W1", m.w1);
  write_real_matrix("W2", m.w2);
}

LogNNetModel import_lognnet_float(const std::string& path) {
  LineReader r(path);
  std::string line = r.require("magic");
  if (line != "LOGNNETF1") r.fail("bad magic '" + line + "', expected LOGNNETF1");

  LogNNetModel m;
  std::vector<long long> dims;
  expect_section(r, r.require("topology"), "topology", dims);
  if (dims.size() != 4) r.fail("topology needs 4 integers");
  m.topology = Topology{static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                        static_cast<int>(dims[2]), static_cast<int>(dims[3])};
  validate(m.topology);
  expect_section(r, r.require("chaos"), "chaos", dims);
  if (dims.size() != 4) r.fail("chaos needs 4 integers");
  m.chaos = ChaosParams{dims[0], dims[1], dims[2], dims[3]};

  const auto np = static_cast<std::size_t>(m.topology.p);
  auto read_vector = [&](const std::string& name, std::vector<double>& dst) {
    expect_section(r, r.require(name.c_str()), name, dims);
    if (dims.size() != 1 || static_cast<std::size_t>(dims[0]) != np)
      r.fail(name + ": bad header");
    dst = parse_real_row(r, r.require("vector row"), np, name);
  };
  read_vector("minS", m.coeffs.min_s);
  read_vector("maxS", m.coeffs.max_s);
  read_vector("meanS", m.coeffs.mean10);

  auto read_matrix = [&](const std::string& name, Matrix& dst, std::size_t rows,
                         std::size_t cols) {
    expect_section(r, r.require(name.c_str()), name, dims);
    if (dims.size() != 2 || static_cast<std::size_t>(dims[0]) != rows ||
        static_cast<std::size_t>(dims[1]) != cols)
      r.fail(name + ": bad header");
    dst = Matrix(rows, cols);
    for (std::size_t row_i = 0; row_i < rows; ++row_i) {
      const auto row = parse_real_row(r, r.require("matrix row"), cols, name);
      for (std::size_t c = 0; c < cols; ++c) dst.at(row_i, c) = row[c];
    }
  };
  read_matrix("W1", m.w1, np + 1, static_cast<std::size_t>(m.topology.m) + 1);
  read_matrix("W2", m.w2, static_cast<std::size_t>(m.topology.m) + 1,
              static_cast<std::size_t>(m.topology.n) + 1);
  return m;
}

namespace {

void write_tree_preorder(std::ostream& os, const HgbTree& tree, std::size_t node) {
  const HgbNode& n = tree.nodes[node];
  if (n.is_leaf) {
    os << "leaf " << fmt(n.value) << '\n';
    return;
  }
  os << "split " << n.feature << ' ' << n.split_bin << '\n';
  write_tree_preorder(os, tree, static_cast<std::size_t>(n.left));
  write_tree_preorder(os, tree, static_cast<std::size_t>(n.right));
}

int read_tree_preorder(LineReader& r, HgbTree& tree, int& remaining) {
  if (remaining <= 0) r.fail("tree: more nodes than the header announced");
  --remaining;
  const std::string line = r.require("tree node");
  std::istringstream is(line);
  std::string kind;
  is >> kind;
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (kind == "leaf") {
    double v;
    if (!(is >> v)) r.fail("leaf node: missing value");
    tree.nodes[static_cast<std::size_t>(index)] = HgbNode{true, -1, -1, -1, -1, v};
  } else if (kind == "split") {
    int feature, bin;
    if (!(is >> feature >> bin)) r.fail("split node: missing feature/bin");
    const int left = read_tree_preorder(r, tree, remaining);
    const int right = read_tree_preorder(r, tree, remaining);
    tree.nodes[static_cast<std::size_t>(index)] =
        HgbNode{false, feature, bin, left, right, 0.0};
  } else {
    r.fail("tree node: unknown kind '" + kind + "'");
  }
  return index;
}

}  // namespace

void export_hgb(const HgbModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << "HGB1\n";
  out << "features " << m.n_features << '\n';
  out << "params trees " << m.params.trees << " learning_rate " << fmt(m.params.learning_rate)
      << " max_leaves " << m.params.max_leaves << " min_samples_leaf "
      << m.params.min_samples_leaf << " l2 " << fmt(m.params.l2) << " max_bins "
      << m.params.max_bins << " seed " << m.params.seed << '\n';
  out << "base_score " << fmt(m.base_score) << '\n';
  for (std::size_t f = 0; f < m.bins.thresholds.size(); ++f) {
    const auto& th = m.bins.thresholds[f];
    out << "bins " << f << ' ' << th.size() << '\n';
    if (!th.empty()) {
      for (std::size_t i = 0; i < th.size(); ++i) {
        if (i) out << ' ';
        out << fmt(th[i]);
      }
      out << '\n';
    }
  }
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    out << "tree " << t << ' ' << m.trees[t].nodes.size() << '\n';
    write_tree_preorder(out, m.trees[t], 0);
  }
}

HgbModel import_hgb(const std::string& path) {
  LineReader r(path);
  std::string line = r.require("magic");
  if (line != "HGB1") r.fail("bad magic '" + line + "', expected HGB1");

  HgbModel m;
  {
    std::istringstream is(r.require("features"));
    std::string kw;
    long long nf;
    if (!(is >> kw >> nf) || kw != "features" || nf <= 0) r.fail("bad features line");
    m.n_features = static_cast<std::size_t>(nf);
  }
  {
    std::istringstream is(r.require("params"));
    std::string kw;
    is >> kw;
    if (kw != "params") r.fail("bad params line");
    std::string key;
    while (is >> key) {
      if (key == "trees")
        is >> m.params.trees;
      else if (key == "learning_rate")
        is >> m.params.learning_rate;
      else if (key == "max_leaves")
        is >> m.params.max_leaves;
      else if (key == "min_samples_leaf")
        is >> m.params.min_samples_leaf;
      else if (key == "l2")
        is >> m.params.l2;
      else if (key == "max_bins")
        is >> m.params.max_bins;
      else if (key == "seed")
        is >> m.params.seed;
      else
        r.fail("params: unknown key '" + key + "'");
      if (!is && !is.eof()) r.fail("params: bad value for '" + key + "'");
    }
  }
  {
    std::istringstream is(r.require("base_score"));
    std::string kw;
    if (!(is >> kw >> m.base_score) || kw != "base_score") r.fail("bad base_score line");
  }
  m.bins.max_bins = m.params.max_bins;
  m.bins.thresholds.resize(m.n_features);
  for (std::size_t f = 0; f < m.n_features; ++f) {
    std::istringstream is(r.require("bins"));
    std::string kw;
    long long idx, count;
    if (!(is >> kw >> idx >> count) || kw != "bins" ||
        idx != static_cast<long long>(f) || count < 0)
      r.fail("bad bins header for feature " + std::to_string(f));
    if (count > 0)
      m.bins.thresholds[f] = parse_real_row(r, r.require("thresholds"),
                                            static_cast<std::size_t>(count), "bins");
  }
  const int n_trees = m.params.trees;
  for (int t = 0; t < n_trees; ++t) {
    std::istringstream is(r.require("tree header"));
    std::string kw;
    long long idx, count;
    if (!(is >> kw >> idx >> count) || kw != "tree" || idx != t || count < 1)
      r.fail("bad tree header for tree " + std::to_string(t));
    HgbTree tree;
    int remaining = static_cast<int>(count);
    read_tree_preorder(r, tree, remaining);
    if (remaining != 0)
      r.fail("tree " + std::to_string(t) + ": expected " + std::to_string(count) +
             " nodes, found " + std::to_string(count - remaining));
    m.trees.push_back(std::move(tree));
  }
  return m;
}

std::string sniff_model_magic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace rbv
