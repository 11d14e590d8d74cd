// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "chanmodel/database.hpp"

#include "common/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace dmimo
{

namespace
{

class Writer
{
  public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void raw(const char *s, std::size_t n) { buf_.append(s, n); }
    const std::string &data() const { return buf_; }

  private:
    void put(std::uint64_t v, int bytes)
    {
        for (int i = 0; i < bytes; ++i)
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    std::string buf_;
};

class Reader
{
  public:
    explicit Reader(std::string data) : data_(std::move(data)) {}
    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(get(8)); }
    std::string raw(std::size_t n)
    {
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return data_.size() - pos_; }
    void need(std::size_t n) const
    {
        if (remaining() < n)
            throw FormatError("channel database is truncated");
    }

  private:
    std::uint64_t get(int bytes)
    {
        need(static_cast<std::size_t>(bytes));
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(bytes);
        return v;
    }
    std::string data_;
    std::size_t pos_ = 0;
};

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_matrix(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!same_bits(a.data()[i].real(), b.data()[i].real()) || !same_bits(a.data()[i].imag(), b.data()[i].imag()))
            return false;
    return true;
}

} // namespace

const LinkChannel &ChannelDatabase::at(int ap_id, int ue_id) const
{
    const auto it = entries.find({ap_id, ue_id});
    if (it == entries.end())
        throw MissingEntry("no channel for AP " + std::to_string(ap_id) + " / UE " + std::to_string(ue_id));
    return it->second;
}

bool ChannelDatabase::complete() const
{
    for (int a : ap_ids)
        for (int u : ue_ids)
            if (!entries.count({a, u}))
                return false;
    return true;
}

bool ChannelDatabase::operator==(const ChannelDatabase &o) const
{
    if (scene_digest != o.scene_digest || seed != o.seed || model != o.model ||
        !same_bits(carrier_frequency, o.carrier_frequency) || ap_antennas != o.ap_antennas ||
        ue_antennas != o.ue_antennas || ap_ids != o.ap_ids || ue_ids != o.ue_ids ||
        rb_center_frequencies.size() != o.rb_center_frequencies.size() || entries.size() != o.entries.size())
        return false;
    for (std::size_t k = 0; k < rb_center_frequencies.size(); ++k)
        if (!same_bits(rb_center_frequencies[k], o.rb_center_frequencies[k]))
            return false;
    for (const auto &[key, link] : entries)
    {
        const auto it = o.entries.find(key);
        if (it == o.entries.end() || it->second.empty != link.empty || it->second.per_rb.size() != link.per_rb.size())
            return false;
        for (std::size_t k = 0; k < link.per_rb.size(); ++k)
            if (!same_matrix(link.per_rb[k], it->second.per_rb[k]))
                return false;
    }
    return true;
}

void save_database(const ChannelDatabase &db, const std::string &path)
{
    if (!db.complete())
        throw MissingEntry("channel database is incomplete");
    Writer w;
    w.raw("DMCH", 4);
    w.u16(database_version);
    w.u32(db.ap_antennas);
    w.u32(db.ue_antennas);
    w.u32(static_cast<std::uint32_t>(db.rb_center_frequencies.size()));
    w.u8(static_cast<std::uint8_t>(db.model));
    w.u64(db.seed);
    w.u64(db.scene_digest);
    w.f64(db.carrier_frequency);
    w.u32(static_cast<std::uint32_t>(db.ap_ids.size()));
    w.u32(static_cast<std::uint32_t>(db.ue_ids.size()));
    for (int id : db.ap_ids)
        w.i32(id);
    for (int id : db.ue_ids)
        w.i32(id);
    for (double f : db.rb_center_frequencies)
        w.f64(f);
    for (int a : db.ap_ids)
        for (int u : db.ue_ids)
            w.u8(db.at(a, u).empty ? 1 : 0);
    for (int a : db.ap_ids)
        for (int u : db.ue_ids)
        {
            const auto &link = db.at(a, u);
            if (link.per_rb.size() != db.rb_center_frequencies.size() || link.rows() != db.ap_antennas ||
                link.cols() != db.ue_antennas)
                throw ConfigError("link dimensions disagree with the database header");
            for (const auto &h : link.per_rb)
                for (Eigen::Index r = 0; r < h.rows(); ++r)
                    for (Eigen::Index c = 0; c < h.cols(); ++c)
                    {
                        w.f64(h(r, c).real());
                        w.f64(h(r, c).imag());
                    }
        }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

ChannelDatabase load_database(const std::string &path, std::optional<std::uint64_t> expected_scene_digest)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    Reader r(std::string(std::istreambuf_iterator<char>(in), {}));

    if (r.raw(4) != "DMCH")
        throw FormatError("'" + path + "' is not a channel database");
    const auto version = r.u16();
    if (version != database_version)
        throw FormatError("unsupported channel database version " + std::to_string(version));

    ChannelDatabase db;
    db.ap_antennas = r.u32();
    db.ue_antennas = r.u32();
    const auto rb = r.u32();
    const auto tag = r.u8();
    if (tag > 1)
        throw FormatError("unknown channel model tag " + std::to_string(tag));
    db.model = static_cast<ChannelModel>(tag);
    db.seed = r.u64();
    db.scene_digest = r.u64();
    db.carrier_frequency = r.f64();
    const auto na = r.u32();
    const auto nu = r.u32();

    const std::uint64_t links = static_cast<std::uint64_t>(na) * nu;
    const std::uint64_t expected = 4ULL * (na + nu) + 8ULL * rb + links +
                                   16ULL * links * rb * db.ap_antennas * db.ue_antennas;
    if (r.remaining() != expected)
        throw FormatError("channel database size does not match its header (truncated or corrupt)");
    if (expected_scene_digest && *expected_scene_digest != db.scene_digest)
        throw DigestMismatch("channel database was built for a different scene");

    for (std::uint32_t i = 0; i < na; ++i)
        db.ap_ids.push_back(r.i32());
    for (std::uint32_t i = 0; i < nu; ++i)
        db.ue_ids.push_back(r.i32());
    for (std::uint32_t k = 0; k < rb; ++k)
        db.rb_center_frequencies.push_back(r.f64());
    std::vector<std::uint8_t> flags(links);
    for (auto &f : flags)
        f = r.u8();

    std::size_t idx = 0;
    for (int a : db.ap_ids)
        for (int u : db.ue_ids)
        {
            LinkChannel link;
            link.ap_ids = {a};
            link.ue_id = u;
            link.model = db.model;
            link.rb_center_frequencies = db.rb_center_frequencies;
            link.empty = flags[idx++] != 0;
            link.per_rb.resize(rb);
            for (auto &h : link.per_rb)
            {
                h.resize(db.ap_antennas, db.ue_antennas);
                for (Eigen::Index row = 0; row < h.rows(); ++row)
                    for (Eigen::Index col = 0; col < h.cols(); ++col)
                    {
                        const double re = r.f64();
                        const double im = r.f64();
                        h(row, col) = {re, im};
                    }
            }
            if (!db.entries.emplace(std::make_pair(a, u), std::move(link)).second)
                throw FormatError("duplicate (AP, UE) entry in channel database");
        }
    return db;
}

LinkChannel stack_channels(const ChannelDatabase &db, std::span<const int> ap_ids, int ue_id)
{
    std::vector<const LinkChannel *> parts;
    parts.reserve(ap_ids.size());
    for (int a : ap_ids)
        parts.push_back(&db.at(a, ue_id));
    return stack_links(parts);
}

ChannelDatabase synthesize_rayleigh_database(const ChannelDatabase &rt, std::uint64_t seed)
{
    if (rt.model != ChannelModel::RayTracing)
        throw ConfigError("Rayleigh synthesis needs a ray-tracing database");
    ChannelDatabase out = rt;
    out.model = ChannelModel::Rayleigh;
    out.seed = seed;
    for (auto &[key, link] : out.entries)
        link = synthesize_rayleigh(rt.at(key.first, key.second), seed);
    return out;
}

} // namespace dmimo
