#pragma once

// Binary snapshots of fields.
//
// Layout (all integers uint32 little-endian):
//   "YMLF" | version | kind | group tag (4 bytes, zero padded) | N |
//   provenance length | provenance bytes | values as little-endian float64
// Bond tables are stored in (offset, direction, position) order, gauge
// transforms in (j, i) order.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ymlat/errors.hpp"
#include "ymlat/field.hpp"

namespace ymlat {

enum class SnapshotKind : std::uint32_t { gauge_field = 1, one_form = 2, gauge_transform = 3 };

struct SnapshotHeader {
    std::uint32_t version = 1;
    SnapshotKind kind = SnapshotKind::gauge_field;
    std::string group;
    int scale = 0;
    std::string provenance;
};

namespace detail {

inline constexpr char snapshot_magic[4] = {'Y', 'M', 'L', 'F'};
inline constexpr std::uint32_t snapshot_version = 1;

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> buf;
    std::memcpy(buf.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    os.write(buf.data(), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    std::array<char, sizeof(T)> buf;
    if (!is.read(buf.data(), sizeof(T))) throw SnapshotError("snapshot: truncated file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    T v;
    std::memcpy(&v, buf.data(), sizeof(T));
    return v;
}

inline void write_header(std::ostream& os, SnapshotKind kind, std::string_view group, int scale,
                         const std::string& provenance) {
    os.write(snapshot_magic, 4);
    put_le<std::uint32_t>(os, snapshot_version);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(kind));
    char tag[4] = {0, 0, 0, 0};
    std::memcpy(tag, group.data(), std::min<std::size_t>(group.size(), 4));
    os.write(tag, 4);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(scale));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(provenance.size()));
    os.write(provenance.data(), static_cast<std::streamsize>(provenance.size()));
}

inline SnapshotHeader read_header(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, snapshot_magic, 4) != 0) throw SnapshotError("snapshot: bad magic");
    SnapshotHeader h;
    h.version = get_le<std::uint32_t>(is);
    if (h.version != snapshot_version) throw SnapshotError("snapshot: unsupported version");
    h.kind = static_cast<SnapshotKind>(get_le<std::uint32_t>(is));
    char tag[4];
    if (!is.read(tag, 4)) throw SnapshotError("snapshot: truncated file");
    h.group.assign(tag, strnlen(tag, 4));
    h.scale = static_cast<int>(get_le<std::uint32_t>(is));
    const auto n = get_le<std::uint32_t>(is);
    h.provenance.resize(n);
    if (n > 0 && !is.read(h.provenance.data(), n)) throw SnapshotError("snapshot: truncated file");
    return h;
}

template <LieGroup G>
void write_elements(std::ostream& os, const std::vector<typename G::Element>& xs) {
    for (const auto& x : xs)
        for (double v : G::to_floats(x)) put_le<double>(os, v);
}

template <LieGroup G>
void read_elements(std::istream& is, std::vector<typename G::Element>& xs) {
    std::array<double, G::element_size> buf;
    for (auto& x : xs) {
        for (auto& v : buf) v = get_le<double>(is);
        x = G::from_floats(buf);
    }
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw SnapshotError("snapshot: cannot open " + p.string() + " for writing");
    return os;
}

inline std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw SnapshotError("snapshot: cannot open " + p.string());
    return is;
}

template <LieGroup G>
void expect(const SnapshotHeader& h, SnapshotKind kind) {
    if (h.kind != kind) throw SnapshotError("snapshot: unexpected kind");
    if (h.group != G::tag) throw SnapshotError("snapshot: group tag mismatch (" + h.group + ")");
}

} // namespace detail

inline SnapshotHeader read_snapshot_header(const std::filesystem::path& p) {
    auto is = detail::open_in(p);
    return detail::read_header(is);
}

template <LieGroup G>
void write_snapshot(const std::filesystem::path& p, const GaugeField<G>& U, const std::string& provenance = "") {
    auto os = detail::open_out(p);
    detail::write_header(os, SnapshotKind::gauge_field, G::tag, U.scale(), provenance);
    detail::write_elements<G>(os, U.values());
}

template <LieGroup G>
void write_snapshot(const std::filesystem::path& p, const GaugeTransform<G>& g, const std::string& provenance = "") {
    auto os = detail::open_out(p);
    detail::write_header(os, SnapshotKind::gauge_transform, G::tag, g.scale(), provenance);
    detail::write_elements<G>(os, g.values());
}

template <LieGroup G>
void write_snapshot(const std::filesystem::path& p, const OneForm<G>& A, const std::string& provenance = "") {
    auto os = detail::open_out(p);
    detail::write_header(os, SnapshotKind::one_form, G::tag, A.scale(), provenance);
    for (const auto& v : A.values())
        for (int k = 0; k < G::algebra_dim; ++k) detail::put_le<double>(os, v.c[k]);
}

template <LieGroup G>
GaugeField<G> read_gauge_field(const std::filesystem::path& p, SnapshotHeader* header = nullptr) {
    auto is = detail::open_in(p);
    const auto h = detail::read_header(is);
    detail::expect<G>(h, SnapshotKind::gauge_field);
    GaugeField<G> U(h.scale);
    detail::read_elements<G>(is, U.values());
    if (header) *header = h;
    return U;
}

template <LieGroup G>
GaugeTransform<G> read_gauge_transform(const std::filesystem::path& p, SnapshotHeader* header = nullptr) {
    auto is = detail::open_in(p);
    const auto h = detail::read_header(is);
    detail::expect<G>(h, SnapshotKind::gauge_transform);
    GaugeTransform<G> g(h.scale);
    detail::read_elements<G>(is, g.values());
    if (header) *header = h;
    return g;
}

template <LieGroup G>
OneForm<G> read_one_form(const std::filesystem::path& p, SnapshotHeader* header = nullptr) {
    auto is = detail::open_in(p);
    const auto h = detail::read_header(is);
    detail::expect<G>(h, SnapshotKind::one_form);
    OneForm<G> A(h.scale);
    for (auto& v : A.values())
        for (int k = 0; k < G::algebra_dim; ++k) v.c[k] = detail::get_le<double>(is);
    if (header) *header = h;
    return A;
}

} // namespace ymlat
