#include "cayleyci/graph_export.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

namespace cayleyci {

std::string to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::edges:
      return "edges";
    case ExportFormat::digraph6:
      return "digraph6";
    case ExportFormat::graph6:
      return "graph6";
    case ExportFormat::dimacs:
      return "dimacs";
  }
  return "?";
}

ExportFormat parse_export_format(std::string_view name) {
  for (auto f : {ExportFormat::edges, ExportFormat::digraph6, ExportFormat::graph6, ExportFormat::dimacs}) {
    if (to_string(f) == name) return f;
  }
  throw usage_error("unknown export format '" + std::string(name) + "'");
}

std::string graph6_size_prefix(std::uint64_t n) {
  std::string out;
  auto put = [&out](std::uint64_t value, int groups) {
    for (int g = groups - 1; g >= 0; --g) {
      out += static_cast<char>(63 + ((value >> (6 * g)) & 63U));
    }
  };
  if (n <= 62) {
    out += static_cast<char>(63 + n);
  } else if (n <= 258047) {
    out += '~';
    put(n, 3);
  } else if (n <= 68719476735ULL) {
    out += "~~";
    put(n, 6);
  } else {
    throw usage_error("graph too large for graph6");
  }
  return out;
}

namespace {

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) { buf_.reserve(kChunk + 64); }
  ~Writer() { flush(); }

  void put(char c) {
    buf_ += c;
    maybe_flush();
  }
  void put(std::string_view s) {
    buf_ += s;
    maybe_flush();
  }
  void put(std::uint64_t x) {
    char tmp[24];
    auto [end, ec] = std::to_chars(tmp, tmp + sizeof tmp, x);
    buf_.append(tmp, end);
    maybe_flush();
  }
  void flush() {
    os_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

 private:
  static constexpr std::size_t kChunk = 1 << 20;
  void maybe_flush() {
    if (buf_.size() >= kChunk) flush();
  }
  std::ostream& os_;
  std::string buf_;
};

// Packs a bit stream into graph6 characters, padding the tail with zeros.
class SixBits {
 public:
  explicit SixBits(Writer& w) : w_(w) {}
  void push(bool bit) {
    acc_ = static_cast<unsigned>(acc_ << 1U) | static_cast<unsigned>(bit);
    if (++used_ == 6) {
      w_.put(static_cast<char>(63 + acc_));
      acc_ = 0;
      used_ = 0;
    }
  }
  // Pushes `count` zero bits.
  void zeros(std::uint64_t count) {
    while (count > 0 && used_ != 0) {
      push(false);
      --count;
    }
    for (; count >= 6; count -= 6) w_.put(static_cast<char>(63));
    while (count-- > 0) push(false);
  }
  void finish() {
    if (used_ != 0) zeros(6 - used_);
  }

 private:
  Writer& w_;
  unsigned acc_ = 0;
  int used_ = 0;
};

struct Layout {
  std::uint32_t p;
  std::size_t dims;
  std::uint64_t vertices;
  std::vector<std::uint64_t> weight;  // p^(dims-1-i)
};

Layout make_layout(const ConnectionSet& s) {
  Layout l{s.p(), s.du() + s.dv(), vector_count(s.modulus(), s.du() + s.dv()), {}};
  l.weight.assign(l.dims, 1);
  for (std::size_t i = l.dims; i-- > 1;) l.weight[i - 1] = l.weight[i] * l.p;
  return l;
}

// Every element of S as a digit vector (u-part then v-part).
std::vector<std::vector<std::uint32_t>> elements(const ConnectionSet& s) {
  const auto mod = s.modulus();
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& c : s.classes()) {
    std::size_t pivot = 0;
    while (c.functional[pivot] == 0) ++pivot;
    const auto inv = mod.inv(c.functional[pivot]);
    const auto free = vector_count(mod, s.dv() - 1);
    for (std::uint64_t idx = 0; idx < free; ++idx) {
      const auto rest = decode_vector(idx, s.dv() - 1, mod);
      std::vector<std::uint32_t> digits(c.offset.coords().begin(), c.offset.coords().end());
      std::vector<std::uint32_t> v(s.dv(), 0);
      std::uint32_t acc = 0;
      for (std::size_t j = 0, r = 0; j < s.dv(); ++j) {
        if (j == pivot) continue;
        v[j] = rest[r++];
        acc = mod.add(acc, mod.mul(v[j], c.functional[j]));
      }
      v[pivot] = mod.mul(mod.sub(c.rhs.value(), acc), inv);
      digits.insert(digits.end(), v.begin(), v.end());
      out.push_back(std::move(digits));
    }
  }
  return out;
}

}  // namespace

ExportStats export_size(const ConnectionSet& s, ExportFormat format, std::uint64_t edge_cap) {
  const auto vertices = vector_count(s.modulus(), s.du() + s.dv());
  const BigInt arcs = BigInt(vertices) * s.cardinality();
  const bool symmetric = s.is_symmetric();
  if (format == ExportFormat::graph6 && !symmetric) {
    throw usage_error("graph6 needs a symmetric connection set; export the undirected closure instead");
  }
  const bool undirected = format == ExportFormat::graph6 || (format == ExportFormat::dimacs && symmetric);
  const BigInt edges = undirected ? arcs / 2 : arcs;
  if (edges > edge_cap) {
    throw usage_error("export would write " + edges.str() + " edges, over the cap of " + std::to_string(edge_cap));
  }
  return {vertices, edges.convert_to<std::uint64_t>(), undirected};
}

ExportStats export_graph(const ConnectionSet& s, ExportFormat format, std::ostream& out, std::uint64_t edge_cap) {
  const auto stats = export_size(s, format, edge_cap);
  const auto layout = make_layout(s);
  const auto elems = elements(s);
  const auto p = layout.p;

  std::vector<std::uint32_t> g_digits(layout.dims);
  std::vector<std::uint64_t> targets(elems.size());
  auto neighbours = [&](std::uint64_t g) {
    auto rem = g;
    for (std::size_t i = 0; i < layout.dims; ++i) {
      g_digits[i] = static_cast<std::uint32_t>(rem / layout.weight[i]);
      rem %= layout.weight[i];
    }
    for (std::size_t k = 0; k < elems.size(); ++k) {
      std::uint64_t h = 0;
      for (std::size_t i = 0; i < layout.dims; ++i) {
        auto d = g_digits[i] + elems[k][i];
        if (d >= p) d -= p;
        h += d * layout.weight[i];
      }
      targets[k] = h;
    }
    std::sort(targets.begin(), targets.end());
  };

  Writer w(out);
  std::uint64_t written = 0;
  switch (format) {
    case ExportFormat::edges:
    case ExportFormat::dimacs: {
      const bool dimacs = format == ExportFormat::dimacs;
      if (dimacs) {
        w.put("p edge ");
        w.put(layout.vertices);
        w.put(' ');
        w.put(stats.edges);
        w.put('\n');
      }
      for (std::uint64_t g = 0; g < layout.vertices; ++g) {
        neighbours(g);
        for (auto h : targets) {
          if (stats.undirected && h < g) continue;
          if (dimacs) w.put("e ");
          w.put(g + (dimacs ? 1 : 0));
          w.put(' ');
          w.put(h + (dimacs ? 1 : 0));
          w.put('\n');
          ++written;
        }
      }
      break;
    }
    case ExportFormat::digraph6: {
      w.put('&');
      w.put(graph6_size_prefix(layout.vertices));
      SixBits bits(w);
      for (std::uint64_t g = 0; g < layout.vertices; ++g) {
        neighbours(g);
        std::uint64_t next = 0;
        for (auto h : targets) {
          bits.zeros(h - next);
          bits.push(true);
          next = h + 1;
          ++written;
        }
        bits.zeros(layout.vertices - next);
      }
      bits.finish();
      w.put('\n');
      break;
    }
    case ExportFormat::graph6: {
      w.put(graph6_size_prefix(layout.vertices));
      SixBits bits(w);
      // column j holds A[i][j] for i < j; by symmetry those are the
      // neighbours of j below j
      for (std::uint64_t j = 1; j < layout.vertices; ++j) {
        neighbours(j);
        std::uint64_t next = 0;
        for (auto i : targets) {
          if (i >= j) break;
          bits.zeros(i - next);
          bits.push(true);
          next = i + 1;
          ++written;
        }
        bits.zeros(j - next);
      }
      bits.finish();
      w.put('\n');
      break;
    }
  }
  w.flush();
  if (written != stats.edges) {
    throw invariant_error("export wrote " + std::to_string(written) + " edges, expected " + std::to_string(stats.edges));
  }
  return stats;
}

}  // namespace cayleyci
