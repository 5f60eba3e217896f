#pragma once

#include "revnet/ingest.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace testing {

inline revnet::ReviewRecord review(std::string product, std::string reviewer, double t, int rating = 5,
                                   std::string text = "", std::optional<revnet::Label> label = std::nullopt) {
    revnet::ReviewRecord r;
    r.product_id = std::move(product);
    r.reviewer_id = std::move(reviewer);
    r.timestamp = t;
    r.rating = rating;
    r.text = std::move(text);
    r.label = label;
    return r;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("revnet_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
