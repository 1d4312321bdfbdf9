// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fdrelay/coeff_cache.hpp"

#include <boost/crc.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdrelay::wishart {

namespace {

using nlohmann::json;
constexpr const char* kChecksumTag = "crc32: ";

std::string crc32_hex(const std::string& bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
    return buf;
}

}  // namespace

std::string serialize_table(const CoeffTable& table) {
    json entries = json::array();
    for (const auto& e : table.entries()) {
        entries.push_back({{"n", e.n}, {"m", e.m}, {"D", algebra::to_string(e.d)}});
    }
    json doc = {{"version", CoeffTable::kFormatVersion},
                {"a", table.dims().a()},
                {"b", table.dims().b()},
                {"K_ab", algebra::to_string(table.k_ab())},
                {"provenance", table.provenance()},
                {"entries", std::move(entries)}};
    std::string body = doc.dump(2) + "\n";
    return body + kChecksumTag + crc32_hex(body) + "\n";
}

CoeffTable deserialize_table(const std::string& text) {
    // The checksum line is the last non-empty line.
    std::string trimmed = text;
    while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r')) trimmed.pop_back();
    const auto line_start = trimmed.rfind('\n');
    if (line_start == std::string::npos || trimmed.compare(line_start + 1, 7, kChecksumTag) != 0) {
        throw CacheError(CacheError::Kind::Parse, "coefficient cache: missing checksum line (truncated file?)");
    }
    const std::string body = trimmed.substr(0, line_start + 1);
    const std::string stored = trimmed.substr(line_start + 1 + std::string(kChecksumTag).size());

    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw CacheError(CacheError::Kind::Parse, std::string("coefficient cache: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version")) {
        throw CacheError(CacheError::Kind::Parse, "coefficient cache: missing version field");
    }
    if (doc["version"] != CoeffTable::kFormatVersion) {
        throw CacheError(CacheError::Kind::Version, "coefficient cache: unsupported version " +
                                                        doc["version"].dump() + " (expected " +
                                                        std::to_string(CoeffTable::kFormatVersion) + ")");
    }
    if (crc32_hex(body) != stored) {
        throw CacheError(CacheError::Kind::Checksum, "coefficient cache: checksum mismatch (stored " + stored +
                                                         ", computed " + crc32_hex(body) + ")");
    }
    try {
        WishartDims dims(doc.at("a").get<int>(), doc.at("b").get<int>());
        std::vector<CoeffEntry> entries;
        for (const auto& e : doc.at("entries")) {
            entries.push_back(CoeffEntry{e.at("n").get<int>(), e.at("m").get<int>(),
                                         algebra::parse_rational(e.at("D").get<std::string>()), 0.0L});
        }
        CoeffTable table(dims, algebra::parse_rational(doc.at("K_ab").get<std::string>()), std::move(entries),
                         doc.value("provenance", std::string(CoeffTable::kAlgorithm)));
        if (table.k_ab() != k_ab(dims)) {
            throw CacheError(CacheError::Kind::Content, "coefficient cache: K_ab does not match dimensions");
        }
        return table;
    } catch (const json::exception& e) {
        throw CacheError(CacheError::Kind::Parse, std::string("coefficient cache: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw CacheError(CacheError::Kind::Content, std::string("coefficient cache: ") + e.what());
    }
}

void cache_store(const CoeffTable& table, const std::filesystem::path& path) {
    // Write-then-rename so concurrent readers never see a partial file.
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError(CacheError::Kind::Io, "cannot open " + tmp + " for writing");
        out << serialize_table(table);
        if (!out.flush()) throw CacheError(CacheError::Kind::Io, "write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw CacheError(CacheError::Kind::Io, "cannot rename " + tmp + ": " + ec.message());
}

CoeffTable cache_load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError(CacheError::Kind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_table(buf.str());
}

std::string cache_file_name(const WishartDims& dims) {
    return "wishart_a" + std::to_string(dims.a()) + "_b" + std::to_string(dims.b()) + ".coeff";
}

CoeffStore::CoeffStore(std::optional<std::filesystem::path> cache_dir) : cache_dir_(std::move(cache_dir)) {}

std::shared_ptr<const CoeffTable> CoeffStore::get(const WishartDims& dims, Origin* origin) {
    std::lock_guard lock(mutex_);
    if (auto it = tables_.find(dims); it != tables_.end()) {
        if (origin) *origin = Origin::Memory;
        return it->second;
    }
    std::shared_ptr<const CoeffTable> table;
    Origin from = Origin::Computed;
    if (cache_dir_) {
        const auto path = *cache_dir_ / cache_file_name(dims);
        if (std::filesystem::exists(path)) {
            table = std::make_shared<const CoeffTable>(cache_load(path));
            if (!(table->dims() == dims)) {
                throw CacheError(CacheError::Kind::Content, path.string() + " holds dimensions " +
                                                                to_string(table->dims()));
            }
            from = Origin::Disk;
        }
    }
    if (!table) {
        table = std::make_shared<const CoeffTable>(extract_coefficients(dims));
        if (cache_dir_) {
            std::filesystem::create_directories(*cache_dir_);
            cache_store(*table, *cache_dir_ / cache_file_name(dims));
        }
    }
    tables_.emplace(dims, table);
    if (origin) *origin = from;
    return table;
}

}  // namespace fdrelay::wishart
