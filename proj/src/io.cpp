#include "hseg/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hseg/error.hpp"
#include "hseg/metrics.hpp"

namespace hseg {

namespace {

constexpr char kMagic[5] = {'H', 'S', 'E', 'G', '1'};
constexpr std::uint8_t kFlagLogits = 1u << 0;
constexpr std::uint8_t kFlagConfidences = 1u << 1;
constexpr std::uint8_t kFlagFeatures = 1u << 2;
constexpr std::size_t kHeaderSize = 5 + 1 + 2 + 4 + 4 + 8;
// Allocation guard; far above any desk-scale dump.
constexpr std::uint64_t kMaxPayloadElems = 1ull << 33;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

float get_f32(const char* p) {
  std::uint32_t bits = get_u32(p);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

void write_dump(const std::string& path, const PredictionDump& dump) {
  const std::uint64_t n = dump.points();
  if (dump.has_logits() && dump.logits.size() != n * dump.logit_cols)
    throw Error("dump: logits size inconsistent with declared shape");
  if (!dump.has_logits() && !dump.logits.empty())
    throw Error("dump: logits present but logit_cols is 0");
  if (dump.has_features() && dump.features.size() != n * dump.feature_cols)
    throw Error("dump: features size inconsistent with declared shape");
  if (dump.has_confidences() && dump.confidences.size() != n)
    throw Error("dump: confidence count inconsistent with point count");

  std::string out;
  out.reserve(kHeaderSize + 4 * (dump.logits.size() + dump.features.size() +
                                 dump.gt.size() + dump.confidences.size()));
  out.append(kMagic, 5);
  std::uint8_t flags = 0;
  if (dump.has_logits()) flags |= kFlagLogits;
  if (dump.has_confidences()) flags |= kFlagConfidences;
  if (dump.has_features()) flags |= kFlagFeatures;
  out.push_back(static_cast<char>(flags));
  out.push_back(0);
  out.push_back(0);
  put_u32(out, dump.logit_cols);
  put_u32(out, dump.feature_cols);
  put_u64(out, n);
  for (float v : dump.features) put_f32(out, v);
  for (float v : dump.logits) put_f32(out, v);
  for (std::uint32_t v : dump.gt) put_u32(out, v);
  for (float v : dump.confidences) put_f32(out, v);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("dump: cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("dump: write to '" + path + "' failed");
}

PredictionDump read_dump(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("dump: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::string data = buf.str();

  if (data.size() < kHeaderSize) throw Error("dump: truncated header in '" + path + "'");
  if (std::memcmp(data.data(), "HSEG", 4) != 0)
    throw Error("dump: bad magic in '" + path + "'");
  if (data[4] != '1')
    throw Error("dump: unsupported container version '" + std::string(1, data[4]) + "'");
  const auto flags = static_cast<std::uint8_t>(data[5]);
  if (flags & ~(kFlagLogits | kFlagConfidences | kFlagFeatures))
    throw Error("dump: unknown flag bits set");

  PredictionDump dump;
  const std::uint32_t logit_cols = get_u32(data.data() + 8);
  const std::uint32_t feature_cols = get_u32(data.data() + 12);
  const std::uint64_t n = get_u64(data.data() + 16);
  if ((flags & kFlagLogits) && logit_cols == 0)
    throw Error("dump: logit flag set with zero columns");
  if (!(flags & kFlagLogits) && logit_cols != 0)
    throw Error("dump: logit columns declared without the logit flag");
  if (((flags & kFlagFeatures) != 0) != (feature_cols != 0))
    throw Error("dump: feature flag and feature columns disagree");

  const std::uint64_t logit_elems = (flags & kFlagLogits) ? n * logit_cols : 0;
  const std::uint64_t feat_elems = (flags & kFlagFeatures) ? n * feature_cols : 0;
  const std::uint64_t conf_elems = (flags & kFlagConfidences) ? n : 0;
  if (n > kMaxPayloadElems || logit_elems > kMaxPayloadElems ||
      feat_elems > kMaxPayloadElems ||
      (logit_cols != 0 && logit_elems / logit_cols != n) ||
      (feature_cols != 0 && feat_elems / feature_cols != n))
    throw Error("dump: declared shape is implausibly large");
  const std::uint64_t expected =
      kHeaderSize + 4 * (logit_elems + feat_elems + n + conf_elems);
  if (data.size() != expected)
    throw Error("dump: payload length " + std::to_string(data.size()) +
                " does not match declared shape (" + std::to_string(expected) + ")");

  dump.logit_cols = logit_cols;
  dump.feature_cols = feature_cols;
  const char* p = data.data() + kHeaderSize;
  dump.features.resize(feat_elems);
  for (std::uint64_t i = 0; i < feat_elems; ++i, p += 4) dump.features[i] = get_f32(p);
  dump.logits.resize(logit_elems);
  for (std::uint64_t i = 0; i < logit_elems; ++i, p += 4) dump.logits[i] = get_f32(p);
  dump.gt.resize(n);
  for (std::uint64_t i = 0; i < n; ++i, p += 4) dump.gt[i] = get_u32(p);
  dump.confidences.resize(conf_elems);
  for (std::uint64_t i = 0; i < conf_elems; ++i, p += 4) dump.confidences[i] = get_f32(p);
  return dump;
}

void write_dump_csv(const std::string& path, const PredictionDump& dump) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("dump: cannot open '" + path + "' for writing");
  f << "point";
  for (std::uint32_t c = 0; c < dump.feature_cols; ++c) f << ",feature" << c;
  for (std::uint32_t c = 0; c < dump.logit_cols; ++c) f << ",logit" << c;
  f << ",gt";
  if (dump.has_confidences()) f << ",confidence";
  f << '\n';
  f.precision(9);
  for (std::size_t i = 0; i < dump.points(); ++i) {
    f << i;
    for (std::uint32_t c = 0; c < dump.feature_cols; ++c)
      f << ',' << dump.features[i * dump.feature_cols + c];
    for (std::uint32_t c = 0; c < dump.logit_cols; ++c)
      f << ',' << dump.logits[i * dump.logit_cols + c];
    if (dump.gt[i] == kIgnoreGt)
      f << ",ignore";
    else
      f << ',' << dump.gt[i];
    if (dump.has_confidences()) f << ',' << dump.confidences[i];
    f << '\n';
  }
}

LearningMap read_learning_map(const std::string& path, const LabelHierarchy& h) {
  std::ifstream f(path);
  if (!f) throw Error("learning map: cannot open '" + path + "'");
  LearningMap map;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::istringstream in(line);
    std::string first;
    if (!(in >> first) || first.front() == '#') continue;
    std::string name;
    if (!(in >> name))
      throw Error("learning map: line " + std::to_string(lineno) + ": expected 'raw_id name'");
    std::uint32_t raw = 0;
    try {
      raw = static_cast<std::uint32_t>(std::stoul(first));
    } catch (const std::exception&) {
      throw Error("learning map: line " + std::to_string(lineno) + ": bad raw id '" +
                  first + "'");
    }
    const int leaf = h.require(name);
    if (!h.is_leaf(leaf))
      throw Error("learning map: '" + name + "' is not a leaf class");
    map.raw_to_leaf[raw] = leaf;
  }
  return map;
}

std::vector<int> read_label_file(const std::string& path, const LearningMap& map,
                                 bool strict) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("label file: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::string data = buf.str();
  if (data.size() % 4 != 0)
    throw Error("label file: '" + path + "' is truncated (size " +
                std::to_string(data.size()) + " not divisible by 4)");
  std::vector<int> out;
  out.reserve(data.size() / 4);
  for (std::size_t i = 0; i < data.size(); i += 4) {
    const std::uint32_t word = get_u32(data.data() + i);
    const std::uint32_t semantic = word & 0xFFFFu;  // high 16 bits: instance id
    auto it = map.raw_to_leaf.find(semantic);
    if (it == map.raw_to_leaf.end()) {
      if (strict)
        throw Error("label file: unmapped semantic id " + std::to_string(semantic));
      out.push_back(kIgnoreLabel);
    } else {
      out.push_back(it->second);
    }
  }
  return out;
}

}  // namespace hseg
