#include "sparsalloc/netfile.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sparsalloc/errors.hpp"
#include "sparsalloc/pruner.hpp"

namespace sparsalloc {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'P', 'A', 'L'};
constexpr std::array<char, 4> kMaskTag = {'M', 'A', 'S', 'K'};

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw CorruptFileError("NetFile: truncated at byte " + std::to_string(pos_));
  }
  std::uint8_t peek() const {
    need(1);
    return in_[pos_];
  }
  bool match(const std::array<char, 4>& tag) {
    need(4);
    if (std::memcmp(in_.data() + pos_, tag.data(), 4) != 0) return false;
    pos_ += 4;
    return true;
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w) {
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(kNetFileVersion);
}

void read_header(Reader& r) {
  if (!r.match(kMagic)) throw CorruptFileError("NetFile: bad magic");
  const std::uint32_t version = r.u32();
  if (version != kNetFileVersion) {
    throw VersionError("NetFile: unsupported version " + std::to_string(version));
  }
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw ShapeError(std::string("NetFile: ") + what + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> read_shapes(Reader& r) {
  const std::uint32_t count = r.u32();
  if (count == 0) throw CorruptFileError("NetFile: zero layers");
  r.need(static_cast<std::size_t>(count) * 8);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes(count);
  for (auto& [rows, cols] : shapes) {
    rows = r.u32();
    cols = r.u32();
    if (rows == 0 || cols == 0) throw CorruptFileError("NetFile: empty layer shape");
  }
  return shapes;
}

}  // namespace

std::vector<std::uint8_t> encode_net(const LayerNet& net) {
  Writer w;
  write_header(w);
  w.u8(static_cast<std::uint8_t>(net.activation()));
  w.u32(checked_u32(net.depth(), "layer count"));
  for (const auto& layer : net.layers()) {
    w.u32(checked_u32(layer.rows(), "rows"));
    w.u32(checked_u32(layer.cols(), "cols"));
  }
  for (const auto& layer : net.layers())
    for (double v : layer.values()) w.f64(v);
  return w.take();
}

LayerNet decode_net(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  read_header(r);
  if (r.peek() == static_cast<std::uint8_t>(kMaskTag[0])) {
    throw CorruptFileError("NetFile: expected a network, found a mask container");
  }
  const std::uint8_t act = r.u8();
  if (act > 1) throw CorruptFileError("NetFile: unknown activation byte " + std::to_string(act));
  const auto shapes = read_shapes(r);
  std::vector<DenseMatrix> layers;
  layers.reserve(shapes.size());
  for (const auto& [rows, cols] : shapes) {
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    r.need(n * 8);
    std::vector<double> entries(n);
    for (double& v : entries) v = r.f64();
    try {
      layers.emplace_back(rows, cols, std::move(entries));
    } catch (const DomainError&) {
      throw CorruptFileError("NetFile: non-finite weight");
    }
  }
  if (r.remaining() != 0) throw CorruptFileError("NetFile: trailing bytes after payload");
  try {
    return LayerNet(std::move(layers), static_cast<Activation>(act));
  } catch (const ShapeError& e) {
    throw CorruptFileError(std::string("NetFile: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_masks(const std::vector<Mask>& masks) {
  if (masks.empty()) throw ShapeError("encode_masks: no masks");
  Writer w;
  write_header(w);
  w.bytes(kMaskTag.data(), kMaskTag.size());
  w.u32(checked_u32(masks.size(), "mask count"));
  for (const auto& m : masks) {
    w.u32(checked_u32(m.rows(), "rows"));
    w.u32(checked_u32(m.cols(), "cols"));
  }
  for (const auto& m : masks)
    for (std::uint8_t v : m.entries()) w.u8(v);
  return w.take();
}

std::vector<Mask> decode_masks(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  read_header(r);
  if (!r.match(kMaskTag)) throw CorruptFileError("NetFile: missing MASK tag");
  const auto shapes = read_shapes(r);
  std::vector<Mask> masks;
  masks.reserve(shapes.size());
  for (const auto& [rows, cols] : shapes) {
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    r.need(n);
    std::vector<std::uint8_t> keep(n);
    for (auto& v : keep) v = r.u8();
    try {
      masks.emplace_back(rows, cols, std::move(keep));
    } catch (const DomainError&) {
      throw CorruptFileError("NetFile: mask byte outside {0,1}");
    }
  }
  if (r.remaining() != 0) throw CorruptFileError("NetFile: trailing bytes after payload");
  return masks;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, const void* data, std::size_t size) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into '" + path.string() + "'");
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, text.data(), text.size());
}

void save_net(const LayerNet& net, const std::filesystem::path& path) {
  const auto bytes = encode_net(net);
  write_file_atomic(path, bytes.data(), bytes.size());
}

LayerNet load_net(const std::filesystem::path& path) { return decode_net(read_file(path)); }

void save_calibration(const CalibrationSet& calib, const std::filesystem::path& path) {
  save_net(LayerNet({calib.x0}, Activation::Linear), path);
}

CalibrationSet load_calibration(const std::filesystem::path& path) {
  const LayerNet net = load_net(path);
  if (net.depth() != 1) throw CorruptFileError("calibration container must hold exactly one matrix");
  return {net.layer(0)};
}

void save_masks(const std::vector<Mask>& masks, const std::filesystem::path& path) {
  const auto bytes = encode_masks(masks);
  write_file_atomic(path, bytes.data(), bytes.size());
}

std::vector<Mask> load_masks(const std::filesystem::path& path) { return decode_masks(read_file(path)); }

std::string content_digest(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sparsalloc
