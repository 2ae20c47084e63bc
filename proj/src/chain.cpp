#include "betacorm/chain.hpp"

#include "betacorm/error.hpp"
#include "betacorm/math.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace betacorm {

PackedBits::PackedBits(const std::vector<Index>& group_sizes, Index num_features)
    : num_features_(num_features) {
  group_word_begin_.reserve(group_sizes.size());
  group_words_.reserve(group_sizes.size());
  Index offset = 0;
  for (const Index n : group_sizes) {
    group_word_begin_.push_back(offset);
    const Index words = (n + 63) / 64;
    group_words_.push_back(words);
    offset += words;
  }
  words_per_feature_ = offset;
  words_.assign(static_cast<std::size_t>(words_per_feature_ * num_features), 0);
}

Index PackedBits::count(Index j, Index i) const {
  const std::size_t begin = static_cast<std::size_t>(
      i * words_per_feature_ + group_word_begin_[static_cast<std::size_t>(j)]);
  const std::size_t end = begin + static_cast<std::size_t>(group_words_[static_cast<std::size_t>(j)]);
  Index total = 0;
  for (std::size_t w = begin; w < end; ++w) total += std::popcount(words_[w]);
  return total;
}

namespace {

void append_17g(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

void save_samples(const PosteriorSamples& samples, const std::filesystem::path& path) {
  if (samples.draws.empty()) throw Error(ErrorKind::data, "no draws to save");
  const Index m_features = samples.num_features();
  const Index d = samples.num_groups();
  const bool per_feature = samples.meta.shape_mode != ShapeMode::global_vague;
  const bool gamma_gamma = samples.meta.shape_mode == ShapeMode::obj_lomax ||
                           samples.meta.shape_mode == ShapeMode::lomax ||
                           samples.meta.shape_mode == ShapeMode::half_cauchy;

  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::data, "cannot open '" + path.string() + "' for writing");

  std::string line = "iter,c";
  if (per_feature) {
    for (Index i = 0; i < m_features; ++i) line += ",a_" + std::to_string(i + 1);
  } else {
    line += ",a";
  }
  for (Index i = 0; i < m_features; ++i) line += ",p_" + std::to_string(i + 1);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < m_features; ++i) {
      line += ",m_" + std::to_string(j + 1) + "_" + std::to_string(i + 1);
    }
  }
  if (gamma_gamma) line += ",phi,kappa";
  out << line << "\n";

  for (const Draw& draw : samples.draws) {
    line.clear();
    line += std::to_string(draw.iter);
    line += ',';
    append_17g(line, draw.c);
    for (Index i = 0; i < draw.shapes.size(); ++i) {
      line += ',';
      append_17g(line, draw.shapes[i]);
    }
    for (Index i = 0; i < m_features; ++i) {
      line += ',';
      append_17g(line, draw.p[i]);
    }
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < m_features; ++i) {
        line += ',';
        append_17g(line, draw.m(j, i));
      }
    }
    if (gamma_gamma) {
      line += ',';
      append_17g(line, draw.phi);
      line += ',';
      append_17g(line, draw.kappa);
    }
    out << line << "\n";
  }
  if (!out) throw Error(ErrorKind::data, "write failed for '" + path.string() + "'");

  nlohmann::json meta{
      {"format", "betacorm-samples"},
      {"version", 1},
      {"iterations", samples.meta.iterations},
      {"burn_in", samples.meta.burn_in},
      {"thinning", samples.meta.thinning},
      {"seed", samples.meta.seed},
      {"shape_mode", to_string(samples.meta.shape_mode)},
      {"config_hash", samples.meta.config_hash},
      {"num_groups", d},
      {"num_features", m_features},
      {"draw_count", samples.draws.size()},
  };
  if (samples.meta.c_accept_rate) {
    meta["c_accept_rate"] = *samples.meta.c_accept_rate;
  } else {
    meta["c_accept_rate"] = nullptr;
  }
  std::ofstream meta_out(path.string() + ".meta.json");
  if (!meta_out) throw Error(ErrorKind::data, "cannot write samples metadata");
  meta_out << meta.dump(2) << "\n";
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

PosteriorSamples load_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::data, "cannot open '" + path.string() + "'");

  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw Error(ErrorKind::data, "'" + path.string() + "' is empty");
  }
  const std::vector<std::string> header = split_csv(header_line);
  if (header.size() < 3 || header[0] != "iter" || header[1] != "c") {
    throw Error(ErrorKind::data, "'" + path.string() + "' is not a samples file");
  }

  bool per_feature = false;
  bool gamma_gamma = false;
  Index m_features = 0;
  Index d = 0;
  std::size_t shape_cols = 0;
  for (std::size_t k = 2; k < header.size(); ++k) {
    const std::string& name = header[k];
    if (name == "a") {
      shape_cols = 1;
    } else if (name.rfind("a_", 0) == 0) {
      per_feature = true;
      ++shape_cols;
    } else if (name.rfind("p_", 0) == 0) {
      m_features = std::max<Index>(m_features, std::stol(name.substr(2)));
    } else if (name.rfind("m_", 0) == 0) {
      const auto sep = name.find('_', 2);
      d = std::max<Index>(d, std::stol(name.substr(2, sep - 2)));
    } else if (name == "phi" || name == "kappa") {
      gamma_gamma = true;
    } else {
      throw Error(ErrorKind::data, "unknown samples column '" + name + "'");
    }
  }
  if (m_features < 1 || d < 1 || shape_cols == 0) {
    throw Error(ErrorKind::data, "samples header is incomplete");
  }
  const std::size_t expected =
      2 + shape_cols + static_cast<std::size_t>(m_features) +
      static_cast<std::size_t>(d * m_features) + (gamma_gamma ? 2 : 0);
  if (header.size() != expected) {
    throw Error(ErrorKind::data, "samples header has unexpected column count");
  }

  PosteriorSamples samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != expected) {
      throw Error(ErrorKind::data, "samples row has wrong field count");
    }
    Draw draw;
    std::size_t k = 0;
    draw.iter = std::stoull(fields[k++]);
    draw.c = std::stod(fields[k++]);
    draw.shapes.resize(static_cast<Index>(shape_cols));
    for (Index i = 0; i < draw.shapes.size(); ++i) draw.shapes[i] = std::stod(fields[k++]);
    draw.p.resize(m_features);
    for (Index i = 0; i < m_features; ++i) draw.p[i] = std::stod(fields[k++]);
    draw.m.resize(d, m_features);
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < m_features; ++i) draw.m(j, i) = std::stod(fields[k++]);
    }
    if (gamma_gamma) {
      draw.phi = std::stod(fields[k++]);
      draw.kappa = std::stod(fields[k++]);
    }
    samples.draws.push_back(std::move(draw));
  }
  if (samples.draws.empty()) throw Error(ErrorKind::data, "samples file has no draws");

  // Sidecar metadata is optional on load; the csv alone is self-describing.
  const std::filesystem::path meta_path(path.string() + ".meta.json");
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta_in(meta_path);
    nlohmann::json meta = nlohmann::json::parse(meta_in, nullptr, true);
    samples.meta.iterations = meta.value("iterations", std::uint64_t{0});
    samples.meta.burn_in = meta.value("burn_in", std::uint64_t{0});
    samples.meta.thinning = meta.value("thinning", std::uint64_t{1});
    samples.meta.seed = meta.value("seed", std::uint64_t{0});
    samples.meta.config_hash = meta.value("config_hash", std::string{});
    samples.meta.shape_mode = shape_mode_from_string(meta.value("shape_mode", std::string{"global"}));
    if (meta.contains("c_accept_rate") && !meta["c_accept_rate"].is_null()) {
      samples.meta.c_accept_rate = meta["c_accept_rate"].get<double>();
    }
  } else {
    samples.meta.shape_mode = per_feature
                                  ? (gamma_gamma ? ShapeMode::obj_lomax : ShapeMode::local_vague)
                                  : ShapeMode::global_vague;
  }
  return samples;
}

std::vector<CredibleRow> summarize_credible(const PosteriorSamples& samples, double level) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw Error(ErrorKind::usage, "credible level must be in (0,1)");
  }
  if (samples.draws.size() < 2) {
    throw Error(ErrorKind::data, "credible summary requires at least 2 draws");
  }
  const double lo = (1.0 - level) / 2.0;
  const double hi = 1.0 - lo;

  auto row = [&](const std::string& name, auto&& getter) {
    std::vector<double> values;
    values.reserve(samples.draws.size());
    for (const Draw& d : samples.draws) values.push_back(getter(d));
    std::sort(values.begin(), values.end());
    return CredibleRow{name, quantile_linear(values, lo), quantile_linear(values, 0.5),
                       quantile_linear(values, hi)};
  };

  std::vector<CredibleRow> rows;
  rows.push_back(row("c", [](const Draw& d) { return d.c; }));
  const Index shape_count = samples.draws.front().shapes.size();
  if (shape_count == 1 && samples.meta.shape_mode == ShapeMode::global_vague) {
    rows.push_back(row("a", [](const Draw& d) { return d.shapes[0]; }));
  } else {
    for (Index i = 0; i < shape_count; ++i) {
      rows.push_back(row("a_" + std::to_string(i + 1), [i](const Draw& d) { return d.shapes[i]; }));
    }
  }
  const bool gamma_gamma = samples.meta.shape_mode == ShapeMode::obj_lomax ||
                           samples.meta.shape_mode == ShapeMode::lomax ||
                           samples.meta.shape_mode == ShapeMode::half_cauchy;
  if (gamma_gamma) {
    rows.push_back(row("phi", [](const Draw& d) { return d.phi; }));
    rows.push_back(row("kappa", [](const Draw& d) { return d.kappa; }));
  }
  return rows;
}

}  // namespace betacorm
