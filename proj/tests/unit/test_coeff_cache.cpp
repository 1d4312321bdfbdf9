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

#include <catch2/catch_amalgamated.hpp>

#include "fdrelay/coeff_cache.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace fdrelay::wishart;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("fdrelay_cache_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

CacheError::Kind load_error_kind(const std::string& text) {
    try {
        (void)deserialize_table(text);
    } catch (const CacheError& e) {
        return e.kind();
    }
    FAIL("expected CacheError");
    return CacheError::Kind::Io;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("store then load is the identity") {
    TempDir dir;
    for (auto [a, b] : {std::pair{2, 3}, {1, 1}, {3, 5}, {4, 7}}) {
        const auto table = extract_coefficients(WishartDims(a, b));
        const auto path = dir.path / cache_file_name(table.dims());
        cache_store(table, path);
        const auto loaded = cache_load(path);
        CHECK(loaded == table);
        CHECK(loaded.provenance() == table.provenance());
        CHECK(loaded.entries().back().d_approx == table.entries().back().d_approx);
    }
    CHECK(cache_file_name(WishartDims(2, 3)) == "wishart_a2_b3.coeff");
}

TEST_CASE("serialized form is stable text with a checksum line") {
    const auto text = serialize_table(extract_coefficients(WishartDims(2, 3)));
    CHECK(text.find("\"K_ab\": \"1/2\"") != std::string::npos);
    CHECK(text.find("\"D\": \"-3/4\"") != std::string::npos);
    CHECK(text.find("\ncrc32: ") != std::string::npos);
    CHECK(text.back() == '\n');
    CHECK(serialize_table(deserialize_table(text)) == text);
}

TEST_CASE("wrong version is a version error") {
    const auto text = serialize_table(extract_coefficients(WishartDims(2, 3)));
    CHECK(load_error_kind(replace_once(text, "\"version\": 1", "\"version\": 2")) == CacheError::Kind::Version);
}

TEST_CASE("truncated file is a parse error") {
    const auto text = serialize_table(extract_coefficients(WishartDims(2, 3)));
    CHECK(load_error_kind(text.substr(0, text.size() / 2)) == CacheError::Kind::Parse);
    CHECK(load_error_kind("") == CacheError::Kind::Parse);

    TempDir dir;
    const auto path = dir.path / "t.coeff";
    write_file(path, text.substr(0, text.size() - 20));
    CHECK_THROWS_AS(cache_load(path), CacheError);
}

TEST_CASE("edited content is a checksum error") {
    const auto text = serialize_table(extract_coefficients(WishartDims(2, 3)));
    CHECK(load_error_kind(replace_once(text, "\"D\": \"-3/4\"", "\"D\": \"-3/5\"")) == CacheError::Kind::Checksum);
}

TEST_CASE("missing file is an I/O error") {
    try {
        (void)cache_load("/nonexistent/dir/x.coeff");
        FAIL("expected CacheError");
    } catch (const CacheError& e) {
        CHECK(e.kind() == CacheError::Kind::Io);
    }
}

TEST_CASE("CoeffStore computes, persists and reuses tables") {
    TempDir dir;
    const WishartDims dims(2, 2);
    CoeffStore::Origin origin{};
    {
        CoeffStore store(dir.path);
        const auto t1 = store.get(dims, &origin);
        CHECK(origin == CoeffStore::Origin::Computed);
        CHECK(fs::exists(dir.path / cache_file_name(dims)));
        const auto t2 = store.get(dims, &origin);
        CHECK(origin == CoeffStore::Origin::Memory);
        CHECK(t1 == t2);
    }
    const auto before = read_file(dir.path / cache_file_name(dims));
    CoeffStore fresh(dir.path);
    const auto t3 = fresh.get(dims, &origin);
    CHECK(origin == CoeffStore::Origin::Disk);
    CHECK(*t3 == extract_coefficients(dims));
    CHECK(read_file(dir.path / cache_file_name(dims)) == before);

    CoeffStore memory_only;
    CHECK(memory_only.get(dims, &origin)->sum() == 1);
    CHECK(origin == CoeffStore::Origin::Computed);
}

TEST_CASE("CoeffStore rejects a corrupt cache file") {
    TempDir dir;
    const WishartDims dims(2, 3);
    write_file(dir.path / cache_file_name(dims), "{ \"version\": 1 }\n");
    CoeffStore store(dir.path);
    CHECK_THROWS_AS(store.get(dims), CacheError);
}
