#include "rsclust/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "rsclust/errors.hpp"

namespace rsclust {

namespace {

using json = nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trimmed(field);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::vector<std::string> read_nonempty_lines(const std::string& path,
                                             bool strip_comments) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (strip_comments) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
    }
    if (trimmed(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

PointSet load_points(const std::string& path, std::optional<int> label_col) {
  const auto lines = read_nonempty_lines(path, /*strip_comments=*/false);
  if (lines.empty()) throw EmptyFile("load_points: " + path + " is empty");

  std::vector<double> coords;
  std::vector<int> labels;
  std::unordered_map<std::string, int> label_ids;
  std::size_t n_cols = 0;
  bool first_data_row = true;

  for (std::size_t row = 0; row < lines.size(); ++row) {
    const auto fields = split_csv(lines[row]);
    if (first_data_row) {
      n_cols = fields.size();
    } else if (fields.size() != n_cols) {
      std::ostringstream msg;
      msg << "load_points: row " << row + 1 << " has " << fields.size()
          << " columns, expected " << n_cols;
      throw RaggedRows(msg.str());
    }

    std::size_t label_idx = n_cols;  // past-the-end when absent
    if (label_col) {
      label_idx = *label_col < 0 ? n_cols - 1
                                 : static_cast<std::size_t>(*label_col);
      if (label_idx >= n_cols)
        throw Error("load_points: label column out of range");
    }

    std::vector<double> row_coords;
    bool bad_coord = false;
    std::size_t bad_col = 0;
    for (std::size_t col = 0; col < fields.size(); ++col) {
      if (col == label_idx) continue;
      double value;
      if (!parse_double(fields[col], value)) {
        bad_coord = true;
        bad_col = col;
        break;
      }
      row_coords.push_back(value);
    }

    if (bad_coord) {
      if (row == 0 && first_data_row) continue;  // header row
      std::ostringstream msg;
      msg << "load_points: non-numeric field at row " << row + 1 << ", column "
          << bad_col + 1;
      throw NonNumericField(msg.str());
    }

    first_data_row = false;
    coords.insert(coords.end(), row_coords.begin(), row_coords.end());
    if (label_col) {
      const std::string raw = trimmed(fields[label_idx]);
      auto [it, inserted] =
          label_ids.try_emplace(raw, static_cast<int>(label_ids.size()));
      labels.push_back(it->second);
    }
  }

  if (coords.empty()) throw EmptyFile("load_points: no data rows in " + path);
  const std::size_t dim = label_col ? n_cols - 1 : n_cols;
  std::optional<std::vector<int>> opt_labels;
  if (label_col) opt_labels = std::move(labels);
  return PointSet(std::move(coords), dim, std::move(opt_labels));
}

LoadedGraph load_graph(const std::string& path) {
  const auto lines = read_nonempty_lines(path, /*strip_comments=*/true);
  if (lines.empty()) throw EmptyFile("load_graph: " + path + " is empty");

  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> names;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] =
        ids.try_emplace(name, static_cast<std::uint32_t>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };

  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::size_t duplicates = 0;
  for (std::size_t row = 0; row < lines.size(); ++row) {
    std::istringstream ss(lines[row]);
    std::string a, b, w_str, extra;
    ss >> a >> b;
    if (a.empty() || b.empty()) {
      std::ostringstream msg;
      msg << "load_graph: malformed line " << row + 1;
      throw MalformedLine(msg.str());
    }
    double w = 1.0;
    if (ss >> w_str) {
      if (!parse_double(w_str, w)) {
        std::ostringstream msg;
        msg << "load_graph: malformed weight on line " << row + 1;
        throw MalformedLine(msg.str());
      }
      if (!(w > 0.0)) {
        std::ostringstream msg;
        msg << "load_graph: non-positive weight on line " << row + 1;
        throw NonPositiveWeight(msg.str());
      }
      if (ss >> extra) {
        std::ostringstream msg;
        msg << "load_graph: trailing fields on line " << row + 1;
        throw MalformedLine(msg.str());
      }
    }
    const std::uint32_t u = intern(a);
    const std::uint32_t v = intern(b);
    if (u == v) {
      std::ostringstream msg;
      msg << "load_graph: self-loop on line " << row + 1;
      throw SelfLoop(msg.str());
    }
    const std::uint64_t key =
        (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
    if (seen.count(key)) {
      ++duplicates;  // keep the first weight
      continue;
    }
    seen[key] = edges.size();
    edges.push_back({u, v, w});
  }
  return {Graph(names.size(), std::move(edges)), std::move(names), duplicates};
}

std::shared_ptr<const DistanceOracle> load_distance_matrix(
    const std::string& path) {
  const auto lines = read_nonempty_lines(path, /*strip_comments=*/false);
  if (lines.empty())
    throw EmptyFile("load_distance_matrix: " + path + " is empty");
  const std::size_t n = lines.size();
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t row = 0; row < n; ++row) {
    const auto fields = split_csv(lines[row]);
    if (fields.size() != n) {
      std::ostringstream msg;
      msg << "load_distance_matrix: row " << row + 1 << " has "
          << fields.size() << " columns for " << n << " rows";
      throw NotSquare(msg.str());
    }
    for (std::size_t col = 0; col < n; ++col) {
      double v;
      const std::string t = trimmed(fields[col]);
      if (t == "inf" || t == "Inf" || t == "INF") {
        v = kInf;
      } else if (!parse_double(fields[col], v)) {
        std::ostringstream msg;
        msg << "load_distance_matrix: non-numeric field at row " << row + 1
            << ", column " << col + 1;
        throw NonNumericField(msg.str());
      }
      values.push_back(v);
    }
  }
  return matrix_oracle(std::move(values), n);
}

std::string dendrogram_to_json(const Dendrogram& d) {
  json doc;
  doc["leaves"] = json::array();
  for (std::size_t i = 0; i < d.n_leaves; ++i) doc["leaves"].push_back(i);
  doc["iterations"] = d.iterations;
  doc["roots"] = json::array();
  for (const auto& r : d.roots) {
    json placement;
    if (r.placement.kind == Placement::Kind::AtEntity) {
      placement = {{"kind", "at_entity"}, {"a", r.placement.a}};
    } else {
      placement = {{"kind", "midpoint"},
                   {"a", r.placement.a},
                   {"b", r.placement.b}};
    }
    doc["roots"].push_back(
        {{"id", r.id}, {"iteration", r.iteration}, {"placement", placement}});
  }
  doc["edges"] = json::array();
  for (std::size_t v = 0; v < d.parent.size(); ++v)
    if (d.parent[v] >= 0)
      doc["edges"].push_back({{"child", v}, {"parent", d.parent[v]}});
  return doc.dump(2);
}

Dendrogram dendrogram_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("dendrogram_from_json: ") + e.what());
  }
  Dendrogram d;
  d.n_leaves = doc.at("leaves").size();
  d.iterations = doc.at("iterations").get<int>();
  for (const auto& r : doc.at("roots")) {
    const auto& pj = r.at("placement");
    Placement placement =
        pj.at("kind").get<std::string>() == "at_entity"
            ? Placement::at(pj.at("a").get<NodeId>())
            : Placement::midpoint(pj.at("a").get<NodeId>(),
                                  pj.at("b").get<NodeId>());
    d.roots.push_back(
        {r.at("id").get<NodeId>(), placement, r.at("iteration").get<int>()});
  }
  d.parent.assign(d.n_nodes(), -1);
  for (const auto& e : doc.at("edges"))
    d.parent[e.at("child").get<std::size_t>()] =
        e.at("parent").get<std::int64_t>();
  return d;
}

std::string dendrogram_to_newick(const Dendrogram& d) {
  std::vector<std::vector<NodeId>> children(d.n_nodes());
  std::vector<NodeId> tops;
  for (std::size_t v = 0; v < d.n_nodes(); ++v) {
    if (d.parent[v] >= 0)
      children[d.parent[v]].push_back(static_cast<NodeId>(v));
    else
      tops.push_back(static_cast<NodeId>(v));
  }
  // Iterative post-order print; trees can be deep for large n.
  std::ostringstream out;
  auto print = [&](NodeId top) {
    struct Frame {
      NodeId node;
      std::size_t next_child = 0;
    };
    std::vector<Frame> stack{{top}};
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto& kids = children[f.node];
      if (kids.empty()) {
        out << "L" << f.node;
        stack.pop_back();
        continue;
      }
      if (f.next_child == 0) out << "(";
      if (f.next_child < kids.size()) {
        if (f.next_child > 0) out << ",";
        stack.push_back({kids[f.next_child++]});
      } else {
        out << ")R" << f.node;
        stack.pop_back();
      }
    }
  };
  if (tops.size() == 1) {
    print(tops[0]);
  } else {
    out << "(";
    for (std::size_t i = 0; i < tops.size(); ++i) {
      if (i > 0) out << ",";
      print(tops[i]);
    }
    out << ")";
  }
  out << ";";
  return out.str();
}

void write_partition_csv(const std::string& path, const Partition& p,
                         const std::vector<std::string>* names) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << "entity_id,cluster_label\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (names)
      out << (*names)[i];
    else
      out << i;
    out << "," << p.labels[i] << "\n";
  }
}

PartitionFile read_partition_csv(const std::string& path) {
  const auto lines = read_nonempty_lines(path, /*strip_comments=*/false);
  if (lines.empty())
    throw EmptyFile("read_partition_csv: " + path + " is empty");
  if (split_csv(lines[0]).size() != 2)
    throw MalformedLine("read_partition_csv: expected two columns");
  PartitionFile pf;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split_csv(lines[row]);
    if (fields.size() != 2) {
      std::ostringstream msg;
      msg << "read_partition_csv: malformed row " << row + 1;
      throw MalformedLine(msg.str());
    }
    pf.entities.push_back(trimmed(fields[0]));
    pf.labels.push_back(trimmed(fields[1]));
  }
  return pf;
}

std::pair<Partition, Partition> align_partitions(const PartitionFile& x,
                                                 const PartitionFile& y) {
  if (x.entities.size() != y.entities.size())
    throw MismatchedEntities("align_partitions: entity counts differ");
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < y.entities.size(); ++i) {
    if (!where.try_emplace(y.entities[i], i).second)
      throw MismatchedEntities("align_partitions: duplicate entity id");
  }
  auto label_id = [](std::unordered_map<std::string, std::uint32_t>& map,
                     const std::string& raw) {
    return map.try_emplace(raw, static_cast<std::uint32_t>(map.size()))
        .first->second;
  };
  std::unordered_map<std::string, std::uint32_t> lx, ly;
  std::vector<std::uint32_t> a, b;
  for (std::size_t i = 0; i < x.entities.size(); ++i) {
    const auto it = where.find(x.entities[i]);
    if (it == where.end())
      throw MismatchedEntities("align_partitions: entity " + x.entities[i] +
                               " missing from the second partition");
    a.push_back(label_id(lx, x.labels[i]));
    b.push_back(label_id(ly, y.labels[it->second]));
  }
  return {make_partition(std::move(a)), make_partition(std::move(b))};
}

}  // namespace rsclust
