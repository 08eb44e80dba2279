#include "kinavg/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kinavg/errors.hpp"

namespace kinavg {

namespace {

constexpr std::uint32_t marker = 0x01020304u;
constexpr std::uint32_t swapped_marker = 0x04030201u;

enum class Kind : std::uint32_t { field = 0, phase_space = 1 };

template <class T>
T byte_swap(T v) {
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <class T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void samples(std::span<const cplx> s) {
    put<std::uint64_t>(s.size());
    for (const auto& z : s) {
      put(static_cast<float>(z.real()));
      put(static_cast<float>(z.imag()));
    }
    if (!out_) throw std::runtime_error("write failed");
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  void set_swap(bool s) { swap_ = s; }
  template <class T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw InputError("container truncated");
    return swap_ ? byte_swap(v) : v;
  }
  std::vector<cplx> samples(std::size_t expected) {
    const auto n = get<std::uint64_t>();
    if (n != expected) throw InputError("container sample count does not match its header");
    std::vector<cplx> out(n);
    for (auto& z : out) {
      const float re = get<float>();
      const float im = get<float>();
      z = {re, im};
    }
    return out;
  }

 private:
  std::istream& in_;
  bool swap_ = false;
};

void write_header(Writer& w, Kind kind, Domain domain, int d, int n_x, int n_t, double len_x, double len_t,
                  std::uint64_t nodes) {
  for (char c : container_magic) w.put(c);
  w.put(container_version);
  w.put(marker);
  w.put(static_cast<std::uint32_t>(kind));
  w.put(static_cast<std::uint32_t>(domain));
  w.put<std::int32_t>(d);
  w.put<std::int32_t>(n_x);
  w.put<std::int32_t>(n_t);
  w.put(len_x);
  w.put(len_t);
  w.put(nodes);
}

struct Header {
  Kind kind;
  Domain domain;
  int d, n_x, n_t;
  double len_x, len_t;
  std::uint64_t nodes;
};

Header read_header(Reader& r) {
  for (char c : container_magic) {
    if (r.get<char>() != c) throw InputError("not a kinavg container (bad magic)");
  }
  const auto version_raw = r.get<std::uint32_t>();
  const auto m = r.get<std::uint32_t>();
  if (m == swapped_marker) {
    r.set_swap(true);
  } else if (m != marker) {
    throw InputError("container endianness marker is corrupt");
  }
  const auto version = m == swapped_marker ? byte_swap(version_raw) : version_raw;
  if (version != container_version) throw InputError("unsupported container version " + std::to_string(version));
  Header h{};
  const auto kind = r.get<std::uint32_t>();
  const auto domain = r.get<std::uint32_t>();
  if (kind > 1) throw InputError("unknown container kind");
  if (domain > 2) throw InputError("unknown domain tag");
  h.kind = static_cast<Kind>(kind);
  h.domain = static_cast<Domain>(domain);
  h.d = r.get<std::int32_t>();
  h.n_x = r.get<std::int32_t>();
  h.n_t = r.get<std::int32_t>();
  h.len_x = r.get<double>();
  h.len_t = r.get<double>();
  h.nodes = r.get<std::uint64_t>();
  return h;
}

}  // namespace

void write_field(std::ostream& out, const SpaceTimeField& f) {
  Writer w(out);
  const auto& g = f.grid();
  write_header(w, Kind::field, f.domain(), g.d(), g.n_x(), g.n_t, g.len_x(), g.len_t, 0);
  w.samples(f.samples());
}

SpaceTimeField read_field(std::istream& in) {
  Reader r(in);
  const Header h = read_header(r);
  if (h.kind != Kind::field) throw InputError("container holds phase-space data, not a field");
  const GridSpec g{SpatialGrid{h.d, h.n_x, h.len_x}, h.n_t, h.len_t};
  g.validate();
  return SpaceTimeField(g, h.domain, r.samples(g.size()));
}

void write_phase_space(std::ostream& out, const PhaseSpaceData& f) {
  Writer w(out);
  const auto& g = f.grid();
  const auto& m = f.measure();
  write_header(w, Kind::phase_space, Domain::physical, g.d, g.n, 1, g.len, 0.0, m.size());
  w.put(static_cast<std::uint32_t>(m.kind));
  w.put(m.kappa);
  w.put(m.scale);
  w.put<std::int32_t>(m.degree);
  for (std::size_t n = 0; n < m.size(); ++n) {
    for (double c : m.nodes[n]) w.put(c);
    w.put(m.weights[n]);
  }
  std::vector<cplx> all;
  all.reserve(g.size() * m.size());
  for (std::size_t n = 0; n < m.size(); ++n) all.insert(all.end(), f.physical(n).begin(), f.physical(n).end());
  w.samples(all);
}

PhaseSpaceData read_phase_space(std::istream& in) {
  Reader r(in);
  const Header h = read_header(r);
  if (h.kind != Kind::phase_space) throw InputError("container holds a field, not phase-space data");
  if (h.domain != Domain::physical) throw InputError("phase-space samples must be physical");
  const SpatialGrid g{h.d, h.n_x, h.len_x};
  g.validate();
  VelocityMeasure m;
  const auto kind = r.get<std::uint32_t>();
  if (kind > 1) throw InputError("unknown measure kind");
  m.kind = static_cast<MeasureKind>(kind);
  m.d = h.d;
  m.kappa = r.get<double>();
  m.scale = r.get<double>();
  m.degree = r.get<std::int32_t>();
  for (std::uint64_t n = 0; n < h.nodes; ++n) {
    Vec3 v{};
    for (double& c : v) c = r.get<double>();
    m.nodes.push_back(v);
    m.weights.push_back(r.get<double>());
  }
  return PhaseSpaceData(g, std::move(m), r.samples(g.size() * h.nodes));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

template <class Fn>
void save_with(const std::filesystem::path& path, Fn&& write) {
  std::ostringstream buf(std::ios::binary);
  write(buf);
  write_file_atomic(path, buf.str());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

void save_field(const std::filesystem::path& path, const SpaceTimeField& f) {
  save_with(path, [&](std::ostream& o) { write_field(o, f); });
}

SpaceTimeField load_field(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_field(in);
}

void save_phase_space(const std::filesystem::path& path, const PhaseSpaceData& f) {
  save_with(path, [&](std::ostream& o) { write_phase_space(o, f); });
}

PhaseSpaceData load_phase_space(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_phase_space(in);
}

}  // namespace kinavg
