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

#pragma once

#include "fdrelay/wishart.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

namespace fdrelay::wishart {

/// I/O, parse, version or checksum failure on a cache file.
class CacheError : public std::runtime_error {
public:
    enum class Kind { Io, Parse, Version, Checksum, Content };

    CacheError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Serialized form: pretty-printed JSON
///   {"version": 1, "a": .., "b": .., "K_ab": "num/den", "provenance": "..",
///    "entries": [{"n": .., "m": .., "D": "num/den"}, ...]}
/// followed by one line "crc32: xxxxxxxx" over the JSON bytes.
std::string serialize_table(const CoeffTable& table);
CoeffTable deserialize_table(const std::string& text);

void cache_store(const CoeffTable& table, const std::filesystem::path& path);
CoeffTable cache_load(const std::filesystem::path& path);

/// "wishart_a<A>_b<B>.coeff"
std::string cache_file_name(const WishartDims& dims);

/// Memoizing source of coefficient tables, optionally backed by a cache
/// directory. Thread-safe.
class CoeffStore {
public:
    enum class Origin { Memory, Disk, Computed };

    explicit CoeffStore(std::optional<std::filesystem::path> cache_dir = std::nullopt);

    /// Returns the table for dims, computing and persisting it on a miss.
    std::shared_ptr<const CoeffTable> get(const WishartDims& dims, Origin* origin = nullptr);

    [[nodiscard]] const std::optional<std::filesystem::path>& cache_dir() const noexcept { return cache_dir_; }

private:
    std::optional<std::filesystem::path> cache_dir_;
    std::mutex mutex_;
    std::map<WishartDims, std::shared_ptr<const CoeffTable>> tables_;
};

}  // namespace fdrelay::wishart
