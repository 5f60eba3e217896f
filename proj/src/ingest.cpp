#include "revnet/ingest.hpp"

#include "revnet/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <set>
#include <tuple>

namespace revnet {

using nlohmann::json;

namespace {

constexpr std::string_view kModule = "ingest";

const std::vector<std::string> kReviewFields = {
    "product_id", "reviewer_id", "rating", "timestamp", "text", "helpful_votes", "has_photo", "label"};

[[noreturn]] void fail_at(std::size_t line, std::string_view field, const std::string& why) {
    throw Error(kModule, "line " + std::to_string(line) + ", field '" + std::string(field) + "': " + why);
}

std::optional<long long> parse_integer(std::string_view text) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_real(std::string_view text) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::optional<bool> parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "True" || text == "TRUE") return true;
    if (text == "false" || text == "0" || text == "False" || text == "FALSE") return false;
    return std::nullopt;
}

void check_record(const ReviewRecord& r, std::size_t line) {
    if (r.product_id.empty()) fail_at(line, "product_id", "empty key");
    if (r.reviewer_id.empty()) fail_at(line, "reviewer_id", "empty key");
    if (r.rating < 1 || r.rating > 5) fail_at(line, "rating", "must be 1..5, got " + std::to_string(r.rating));
    if (r.helpful_votes < 0) fail_at(line, "helpful_votes", "must be non-negative");
}

ReviewRecord record_from_fields(const std::vector<std::string>& fields,
                                const std::vector<int>& column_of, std::size_t line) {
    auto get = [&](std::size_t k) -> std::string_view {
        const int col = column_of[k];
        return col < 0 ? std::string_view{} : std::string_view(fields[static_cast<std::size_t>(col)]);
    };
    ReviewRecord r;
    r.product_id = std::string(get(0));
    r.reviewer_id = std::string(get(1));
    auto rating = parse_integer(get(2));
    if (!rating) fail_at(line, "rating", "not an integer: '" + std::string(get(2)) + "'");
    if (*rating < 1 || *rating > 5) fail_at(line, "rating", "must be 1..5, got " + std::to_string(*rating));
    r.rating = static_cast<int>(*rating);
    try {
        r.timestamp = parse_timestamp(get(3));
    } catch (const Error& e) {
        fail_at(line, "timestamp", e.what());
    }
    r.text = std::string(get(4));
    auto votes = parse_integer(get(5));
    if (!votes || *votes < 0) fail_at(line, "helpful_votes", "not a non-negative integer: '" + std::string(get(5)) + "'");
    r.helpful_votes = static_cast<int>(*votes);
    auto photo = parse_bool(get(6));
    if (!photo) fail_at(line, "has_photo", "not a boolean: '" + std::string(get(6)) + "'");
    r.has_photo = *photo;
    if (!get(7).empty()) {
        try {
            r.label = parse_label(get(7));
        } catch (const Error& e) {
            fail_at(line, "label", e.what());
        }
    }
    check_record(r, line);
    return r;
}

std::vector<std::pair<std::size_t, ReviewRecord>> parse_csv_records(std::string_view content) {
    const auto rows = csv::parse(content);
    if (rows.empty()) throw Error(kModule, "missing header");
    const auto& header = rows.front().fields;
    std::vector<int> column_of(kReviewFields.size(), -1);
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto it = std::find(kReviewFields.begin(), kReviewFields.end(), header[c]);
        if (it == kReviewFields.end()) fail_at(1, header[c], "unknown column");
        auto k = static_cast<std::size_t>(it - kReviewFields.begin());
        if (column_of[k] >= 0) fail_at(1, header[c], "duplicate column");
        column_of[k] = static_cast<int>(c);
    }
    for (std::size_t k = 0; k + 1 < kReviewFields.size(); ++k)
        if (column_of[k] < 0) fail_at(1, kReviewFields[k], "missing column");

    std::vector<std::pair<std::size_t, ReviewRecord>> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.fields.size() != header.size())
            fail_at(row.line, "*", "expected " + std::to_string(header.size()) + " fields, got " +
                                       std::to_string(row.fields.size()));
        out.emplace_back(row.line, record_from_fields(row.fields, column_of, row.line));
    }
    return out;
}

std::vector<std::pair<std::size_t, ReviewRecord>> parse_jsonl_records(std::string_view content) {
    std::vector<std::pair<std::size_t, ReviewRecord>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const auto nl = content.find('\n', pos);
        const auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            fail_at(line_no, "*", std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) fail_at(line_no, "*", "expected a JSON object");
        for (const auto& [key, _] : obj.items())
            if (std::find(kReviewFields.begin(), kReviewFields.end(), key) == kReviewFields.end())
                fail_at(line_no, key, "unknown key");
        for (std::size_t k = 0; k + 1 < kReviewFields.size(); ++k)
            if (!obj.contains(kReviewFields[k])) fail_at(line_no, kReviewFields[k], "missing key");

        ReviewRecord r;
        auto str = [&](const char* key) {
            const auto& v = obj.at(key);
            if (!v.is_string()) fail_at(line_no, key, "expected a string");
            return v.get<std::string>();
        };
        r.product_id = str("product_id");
        r.reviewer_id = str("reviewer_id");
        r.text = str("text");
        const auto& rating = obj.at("rating");
        if (!rating.is_number_integer()) fail_at(line_no, "rating", "expected an integer");
        const auto rating_value = rating.get<long long>();
        if (rating_value < 1 || rating_value > 5)
            fail_at(line_no, "rating", "must be 1..5, got " + std::to_string(rating_value));
        r.rating = static_cast<int>(rating_value);
        const auto& ts = obj.at("timestamp");
        try {
            if (ts.is_number()) {
                r.timestamp = ts.get<double>();
                if (!std::isfinite(r.timestamp)) throw Error(kModule, "non-finite");
            } else if (ts.is_string()) {
                r.timestamp = parse_timestamp(ts.get<std::string>());
            } else {
                fail_at(line_no, "timestamp", "expected number or ISO-8601 string");
            }
        } catch (const Error& e) {
            fail_at(line_no, "timestamp", e.what());
        }
        const auto& votes = obj.at("helpful_votes");
        if (!votes.is_number_integer() || votes.get<long long>() < 0)
            fail_at(line_no, "helpful_votes", "expected a non-negative integer");
        r.helpful_votes = static_cast<int>(votes.get<long long>());
        const auto& photo = obj.at("has_photo");
        if (photo.is_boolean()) {
            r.has_photo = photo.get<bool>();
        } else if (photo.is_number_integer() && (photo.get<int>() == 0 || photo.get<int>() == 1)) {
            r.has_photo = photo.get<int>() == 1;
        } else {
            fail_at(line_no, "has_photo", "expected a boolean");
        }
        if (obj.contains("label") && !obj.at("label").is_null()) {
            const auto& lab = obj.at("label");
            if (!lab.is_string()) fail_at(line_no, "label", "expected a string");
            const auto text = lab.get<std::string>();
            if (!text.empty()) {
                try {
                    r.label = parse_label(text);
                } catch (const Error& e) {
                    fail_at(line_no, "label", e.what());
                }
            }
        }
        check_record(r, line_no);
        out.emplace_back(line_no, std::move(r));
    }
    return out;
}

Dataset group_with_lines(std::vector<std::pair<std::size_t, ReviewRecord>> records) {
    std::set<std::tuple<std::string, std::string, double>> seen;
    std::map<std::string, ProductReviewSet> groups;
    std::map<std::string, std::size_t> label_line;
    for (auto& [line, r] : records) {
        if (!seen.emplace(r.product_id, r.reviewer_id, r.timestamp).second)
            throw Error(kModule, "line " + std::to_string(line) + ": duplicate (product_id, reviewer_id, timestamp) triple (" +
                                     r.product_id + ", " + r.reviewer_id + ", " + format_number(r.timestamp) + ")");
        auto [it, inserted] = groups.try_emplace(r.product_id);
        auto& set = it->second;
        if (inserted) {
            set.product_id = r.product_id;
            set.label = r.label;
            label_line[r.product_id] = line;
        } else if (set.label != r.label) {
            throw Error(kModule, "line " + std::to_string(line) + ", field 'label': inconsistent label for product '" +
                                     r.product_id + "' (first seen at line " +
                                     std::to_string(label_line[r.product_id]) + ")");
        }
        set.reviews.push_back(std::move(r));
    }
    Dataset out;
    out.reserve(groups.size());
    for (auto& [_, set] : groups) {
        std::sort(set.reviews.begin(), set.reviews.end(), [](const ReviewRecord& a, const ReviewRecord& b) {
            return std::tie(a.timestamp, a.reviewer_id) < std::tie(b.timestamp, b.reviewer_id);
        });
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace

double parse_timestamp(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw Error(kModule, "empty timestamp");
    if (auto days = parse_real(text)) return *days;

    // ISO-8601: YYYY-MM-DD[THH:MM[:SS[.fff]]][Z]
    auto number = [&](std::size_t pos, std::size_t len) -> int {
        if (pos + len > text.size()) throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
        auto v = parse_integer(text.substr(pos, len));
        if (!v) throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
        return static_cast<int>(*v);
    };
    if (text.size() < 10 || text[4] != '-' || text[7] != '-')
        throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
    using namespace std::chrono;
    const year_month_day date{year{number(0, 4)}, month{static_cast<unsigned>(number(5, 2))},
                              day{static_cast<unsigned>(number(8, 2))}};
    if (!date.ok()) throw Error(kModule, "invalid calendar date '" + std::string(text) + "'");
    double result = sys_days{date}.time_since_epoch().count();
    if (text.size() == 10) return result;
    if (text[10] != 'T' && text[10] != ' ') throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
    auto rest = text.substr(11);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    if (rest.size() < 5 || rest[2] != ':') throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
    const int hh = number(11, 2);
    const int mm = number(14, 2);
    double ss = 0.0;
    if (rest.size() > 5) {
        if (rest[5] != ':') throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
        auto sec = parse_real(rest.substr(6));
        if (!sec) throw Error(kModule, "bad timestamp '" + std::string(text) + "'");
        ss = *sec;
    }
    if (hh > 23 || mm > 59 || ss < 0 || ss >= 61) throw Error(kModule, "bad time of day '" + std::string(text) + "'");
    return result + (hh * 3600.0 + mm * 60.0 + ss) / 86400.0;
}

ReviewFormat review_format_from_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv") return ReviewFormat::csv;
    if (ext == ".jsonl" || ext == ".json") return ReviewFormat::jsonl;
    throw Error(kModule, "cannot infer format from extension '" + ext + "' (expected .csv or .jsonl)");
}

Dataset group_reviews(std::vector<ReviewRecord> records) {
    std::vector<std::pair<std::size_t, ReviewRecord>> numbered;
    numbered.reserve(records.size());
    std::size_t i = 0;
    for (auto& r : records) {
        check_record(r, ++i);
        numbered.emplace_back(i, std::move(r));
    }
    return group_with_lines(std::move(numbered));
}

Dataset parse_reviews(std::string_view content, ReviewFormat format) {
    return group_with_lines(format == ReviewFormat::csv ? parse_csv_records(content) : parse_jsonl_records(content));
}

Dataset load_reviews(const std::filesystem::path& path, ReviewFormat format) {
    return parse_reviews(read_file(path), format);
}

std::string serialize_reviews(const Dataset& data, ReviewFormat format) {
    std::string out;
    if (format == ReviewFormat::csv) {
        out += csv::join(kReviewFields) + "\n";
        for (const auto& set : data)
            for (const auto& r : set.reviews)
                out += csv::join({r.product_id, r.reviewer_id, std::to_string(r.rating), format_number(r.timestamp),
                                  r.text, std::to_string(r.helpful_votes), r.has_photo ? "true" : "false",
                                  r.label ? std::string(to_string(*r.label)) : std::string{}}) +
                       "\n";
        return out;
    }
    for (const auto& set : data) {
        for (const auto& r : set.reviews) {
            // Field order is fixed so output bytes are stable.
            out += "{\"product_id\":" + json(r.product_id).dump() + ",\"reviewer_id\":" + json(r.reviewer_id).dump() +
                   ",\"rating\":" + std::to_string(r.rating) + ",\"timestamp\":" + format_number(r.timestamp) +
                   ",\"text\":" + json(r.text).dump() + ",\"helpful_votes\":" + std::to_string(r.helpful_votes) +
                   ",\"has_photo\":" + (r.has_photo ? "true" : "false") +
                   ",\"label\":" + (r.label ? json(std::string(to_string(*r.label))).dump() : "null") + "}\n";
        }
    }
    return out;
}

void write_reviews(const std::filesystem::path& path, const Dataset& data, ReviewFormat format) {
    write_file_atomic(path, serialize_reviews(data, format));
}

// --- embeddings -------------------------------------------------------------

std::string_view to_string(ImageOwner owner) {
    return owner == ImageOwner::product_image ? "product_image" : "review_image";
}

void validate_embedding(const ImageEmbedding& e, Index expected_dim) {
    if (e.vector.size() != expected_dim)
        throw Error(kModule, "embedding '" + e.image_id + "' has length " + std::to_string(e.vector.size()) +
                                 ", expected " + std::to_string(expected_dim));
    if (!e.vector.allFinite()) throw Error(kModule, "embedding '" + e.image_id + "' has non-finite entries");
    if ((e.vector.array() == 0.0).all())
        throw Error(kModule, "embedding '" + e.image_id + "' is the zero vector (cosine similarity undefined)");
    if (e.product_id.empty()) throw Error(kModule, "embedding '" + e.image_id + "' has empty product_id");
    if (e.owner == ImageOwner::review_image && e.review_id.empty())
        throw Error(kModule, "review image '" + e.image_id + "' has no review_id");
}

EmbeddingIndex::EmbeddingIndex(std::vector<ImageEmbedding> embeddings) : embeddings_(std::move(embeddings)) {
    for (std::size_t i = 0; i < embeddings_.size(); ++i)
        buckets_[{embeddings_[i].product_id, embeddings_[i].owner}].push_back(i);
}

std::vector<const ImageEmbedding*> EmbeddingIndex::find(const std::string& product_id, ImageOwner owner) const {
    std::vector<const ImageEmbedding*> out;
    auto it = buckets_.find({product_id, owner});
    if (it == buckets_.end()) return out;
    out.reserve(it->second.size());
    for (auto i : it->second) out.push_back(&embeddings_[i]);
    return out;
}

EmbeddingIndex parse_embeddings(std::string_view content, Index expected_dim) {
    std::vector<ImageEmbedding> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const auto nl = content.find('\n', pos);
        const auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            const json obj = json::parse(line);
            ImageEmbedding e;
            const auto owner = obj.at("owner").get<std::string>();
            if (owner == "product_image") {
                e.owner = ImageOwner::product_image;
            } else if (owner == "review_image") {
                e.owner = ImageOwner::review_image;
            } else {
                fail_at(line_no, "owner", "unknown owner '" + owner + "'");
            }
            e.product_id = obj.at("product_id").get<std::string>();
            if (obj.contains("review_id") && !obj.at("review_id").is_null())
                e.review_id = obj.at("review_id").get<std::string>();
            e.image_id = obj.at("image_id").get<std::string>();
            const auto& vec = obj.at("vector");
            if (!vec.is_array()) fail_at(line_no, "vector", "expected an array");
            e.vector.resize(static_cast<Index>(vec.size()));
            for (std::size_t k = 0; k < vec.size(); ++k) e.vector[static_cast<Index>(k)] = vec[k].get<double>();
            try {
                validate_embedding(e, expected_dim);
            } catch (const Error& err) {
                fail_at(line_no, "vector", err.what());
            }
            out.push_back(std::move(e));
        } catch (const json::exception& err) {
            fail_at(line_no, "*", std::string("invalid embedding record: ") + err.what());
        }
    }
    return EmbeddingIndex(std::move(out));
}

EmbeddingIndex load_embeddings(const std::filesystem::path& path, Index expected_dim) {
    return parse_embeddings(read_file(path), expected_dim);
}

std::string serialize_embeddings(const std::vector<ImageEmbedding>& embeddings) {
    std::string out;
    for (const auto& e : embeddings) {
        out += "{\"owner\":\"" + std::string(to_string(e.owner)) + "\",\"product_id\":" + json(e.product_id).dump() +
               ",\"review_id\":" + (e.review_id.empty() ? std::string("null") : json(e.review_id).dump()) +
               ",\"image_id\":" + json(e.image_id).dump() + ",\"vector\":[";
        for (Index k = 0; k < e.vector.size(); ++k) {
            if (k) out.push_back(',');
            out += format_number(e.vector[k]);
        }
        out += "]}\n";
    }
    return out;
}

void write_embeddings(const std::filesystem::path& path, const std::vector<ImageEmbedding>& embeddings) {
    write_file_atomic(path, serialize_embeddings(embeddings));
}

}  // namespace revnet
