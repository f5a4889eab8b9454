#pragma once

// File formats: bit matrices as hex rows, graphs (JSON or edge-list text),
// joint pmfs, transcripts, and JSON renderings of results.
//
// Hex rows: column 0 is the most significant bit of the first hex digit; the
// final digit is zero-padded on the right, so a row over p columns takes
// ceil(p/4) digits ("110" over 3 columns is "c").

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skc/error.hpp"
#include "skc/gf2.hpp"
#include "skc/multipartite_info.hpp"
#include "skc/partition_lp.hpp"
#include "skc/pin_instance.hpp"
#include "skc/rational.hpp"
#include "skc/source_model.hpp"
#include "skc/transcript.hpp"

namespace skc::io {

using json = nlohmann::ordered_json;

inline std::string to_hex(const BitVector& v) {
  static constexpr char digits[] = "0123456789abcdef";
  const std::size_t n = (v.size() + 3) / 4;
  std::string out(n, '0');
  for (std::size_t d = 0; d < n; ++d) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t col = d * 4 + b;
      if (col < v.size() && v.test(col)) nibble |= 8u >> b;
    }
    out[d] = digits[nibble];
  }
  return out;
}

inline BitVector from_hex(std::string_view hex, std::size_t columns) {
  const std::size_t n = (columns + 3) / 4;
  if (hex.size() != n) {
    throw ParseError("hex row '" + std::string(hex) + "' has " + std::to_string(hex.size()) + " digits; expected " +
                     std::to_string(n) + " for " + std::to_string(columns) + " columns");
  }
  BitVector v(columns);
  for (std::size_t d = 0; d < n; ++d) {
    const char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[d])));
    unsigned nibble = 0;
    if (ch >= '0' && ch <= '9') {
      nibble = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      nibble = static_cast<unsigned>(ch - 'a' + 10);
    } else {
      throw ParseError("invalid hex digit in row '" + std::string(hex) + "'");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (!(nibble & (8u >> b))) continue;
      const std::size_t col = d * 4 + b;
      if (col >= columns) throw ParseError("hex row '" + std::string(hex) + "' sets padding bits");
      v.set(col);
    }
  }
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

/// Runs `body`, reporting JSON type/shape errors as ParseError.
template <class F>
auto with_schema_errors(const std::string& what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

/// 64-bit FNV-1a digest, hex-encoded.
inline std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xfu];
    h >>= 4;
  }
  return out;
}

// -- bit matrices -------------------------------------------------------------

inline json matrix_to_json(const BitMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.rows()) rows.push_back(to_hex(r));
  return json{{"labels", m.space().labels()}, {"rows", rows}};
}

/// Reads {"labels": [...]?, "rows": ["hex", ...]} over `space`. When labels are
/// given they must equal the space's labels.
inline BitMatrix matrix_from_json(const json& j, const SpacePtr& space) {
  return with_schema_errors("matrix", [&] {
    if (j.contains("labels")) {
      auto labels = j.at("labels").get<std::vector<std::string>>();
      if (labels != space->labels()) throw LabelError("matrix labels do not match the column space");
    }
    std::vector<BitVector> rows;
    for (const auto& r : j.at("rows")) rows.push_back(from_hex(r.get<std::string>(), space->dimension()));
    return BitMatrix(space, std::move(rows));
  });
}

// -- graphs -------------------------------------------------------------------

inline Graph graph_from_json(const json& j) {
  return with_schema_errors("graph", [&] {
    Graph g(j.at("vertices").get<int>());
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("graph: each edge must be a pair [u, v]");
      g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    return g;
  });
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return json{{"vertices", g.vertex_count()}, {"edges", edges}};
}

/// Whitespace edge list: one "u v" pair per line, '#' starts a comment, and an
/// optional line "vertices m" fixes the vertex count (default: largest endpoint).
inline Graph graph_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::optional<int> declared;
  std::vector<Edge> edges;
  int largest = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    auto to_int = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
      }
    };
    if (tokens.size() == 2 && tokens[0] == "vertices") {
      declared = to_int(tokens[1]);
      continue;
    }
    if (tokens.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": expected 'u v'");
    Edge e{to_int(tokens[0]), to_int(tokens[1])};
    largest = std::max({largest, e.u, e.v});
    edges.push_back(e);
  }
  try {
    return Graph(declared.value_or(largest), std::move(edges));
  } catch (const GraphError& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

/// Loads a graph file, choosing JSON when the first non-blank character is '{'.
inline Graph load_graph(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return graph_from_json(parse_json(text, path));
    } catch (const GraphError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  try {
    return graph_from_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// -- joint pmfs ---------------------------------------------------------------

/// {"terminals": m, "alphabet_sizes": [...], "pmf": [[[s1,...,sm], "p/q"], ...]}
inline JointPMF pmf_from_json(const json& j) {
  return with_schema_errors("pmf", [&] {
    const int m = j.at("terminals").get<int>();
    auto sizes = j.at("alphabet_sizes").get<std::vector<Symbol>>();
    if (static_cast<int>(sizes.size()) != m) throw ParseError("pmf: alphabet_sizes must have one entry per terminal");
    std::vector<JointPMF::Entry> entries;
    for (const auto& e : j.at("pmf")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("pmf: each entry must be [[symbols...], \"p/q\"]");
      entries.emplace_back(e[0].get<Outcome>(), parse_rational(e[1].get<std::string>()));
    }
    try {
      return JointPMF(std::move(sizes), std::move(entries));
    } catch (const ArgumentError& err) {
      throw ParseError(std::string("pmf: ") + err.what());
    }
  });
}

inline json pmf_to_json(const JointPMF& p) {
  json entries = json::array();
  for (const auto& [x, px] : p.entries()) entries.push_back({x, to_string(px)});
  return json{{"terminals", p.terminal_count()}, {"alphabet_sizes", p.alphabet_sizes()}, {"pmf", entries}};
}

// -- results --------------------------------------------------------------------

inline json rational_json(const Rational& r) { return to_string(r); }

inline json bits_json(const Bits& b) {
  json out{{"value", b.value}};
  if (b.exact) out["exact"] = to_string(*b.exact);
  return out;
}

inline json partition_to_json(const FractionalPartition& lambda) {
  json out = json::object();
  for (const auto& [b, w] : lambda.weights()) out[to_string(b)] = to_string(w);
  return out;
}

inline FractionalPartition partition_from_json(const json& j, int m) {
  return with_schema_errors("partition", [&] {
    std::map<SubsetMask, Rational> weights;
    for (const auto& [key, value] : j.items()) {
      auto members = parse_json(key, "partition key").get<std::vector<int>>();
      try {
        weights.emplace(SubsetMask::of(members), parse_rational(value.get<std::string>()));
      } catch (const ArgumentError& e) {
        throw ParseError("partition: " + std::string(e.what()));
      }
    }
    try {
      return FractionalPartition(m, std::move(weights));
    } catch (const ArgumentError& e) {
      throw ParseError("partition: " + std::string(e.what()));
    }
  });
}

inline json cmi_report_to_json(const CmiReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) {
    terms.push_back(json{{"block", to_string(t.block)}, {"weight", to_string(t.weight)}, {"conditional_entropy", bits_json(t.conditional)}});
  }
  return json{{"backend", to_string(r.backend)},
              {"value", bits_json(r.value)},
              {"lambda", partition_to_json(r.lambda_used)},
              {"joint_given_l", bits_json(r.joint_given_l)},
              {"terms", terms}};
}

// -- transcripts ----------------------------------------------------------------

inline json pin_to_json(const PinInstance& pin) {
  json g = graph_to_json(pin.graph());
  g["n"] = pin.n();
  return g;
}

inline std::shared_ptr<const PinInstance> pin_from_json(const json& j) {
  return with_schema_errors("pin", [&] {
    const int n = j.contains("n") ? j.at("n").get<int>() : 1;
    try {
      return std::make_shared<const PinInstance>(graph_from_json(j), n);
    } catch (const GraphError& e) {
      throw ParseError(std::string("pin: ") + e.what());
    } catch (const ArgumentError& e) {
      throw ParseError(std::string("pin: ") + e.what());
    }
  });
}

inline json transcript_to_json(const LinearTranscript& t, const std::optional<BitMatrix>& key = std::nullopt) {
  json txs = json::array();
  for (const auto& tx : t.transmissions()) txs.push_back(json{{"sender", tx.sender}, {"row", to_hex(tx.row)}});
  json out{{"pin", pin_to_json(t.pin())}, {"labels", t.pin().space()->labels()}, {"transmissions", txs}};
  if (key) {
    json rows = json::array();
    for (const auto& r : key->rows()) rows.push_back(to_hex(r));
    out["key"] = rows;
  }
  return out;
}

struct TranscriptFile {
  std::shared_ptr<const PinInstance> pin;
  LinearTranscript transcript;
  std::optional<BitMatrix> key;
};

inline TranscriptFile transcript_from_json(const json& j) {
  return with_schema_errors("transcript", [&] {
    auto pin = pin_from_json(j.at("pin"));
    if (j.contains("labels") && j.at("labels").get<std::vector<std::string>>() != pin->space()->labels()) {
      throw ParseError("transcript: labels do not match the PIN column order");
    }
    LinearTranscript t(pin);
    for (const auto& tx : j.at("transmissions")) {
      try {
        t.append(tx.at("sender").get<int>(), from_hex(tx.at("row").get<std::string>(), pin->column_count()));
      } catch (const ArgumentError& e) {
        throw ParseError(std::string("transcript: ") + e.what());
      }
    }
    std::optional<BitMatrix> key;
    if (j.contains("key")) {
      std::vector<BitVector> rows;
      for (const auto& r : j.at("key")) rows.push_back(from_hex(r.get<std::string>(), pin->column_count()));
      key = BitMatrix(pin->space(), std::move(rows));
    }
    return TranscriptFile{pin, std::move(t), std::move(key)};
  });
}

}  // namespace skc::io
