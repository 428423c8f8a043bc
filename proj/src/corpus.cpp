#include "ecpe/corpus.hpp"

#include <fstream>
#include <json.hpp>
#include <set>

#include "ecpe/error.hpp"

namespace ecpe {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
    return *it;
}

std::size_t index_field(const json& j, const char* key)
{
    const auto& v = require_field(j, key);
    if (!v.is_number_unsigned()) throw DataError(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

ReviewRecord parse_record(const json& j)
{
    if (!j.is_object()) throw DataError("record is not a JSON object");
    ReviewRecord r;
    const auto& id = require_field(j, "review_id");
    const auto& product = require_field(j, "product_id");
    const auto& stars = require_field(j, "stars");
    const auto& text = require_field(j, "text");
    if (!id.is_string() || id.get<std::string>().empty()) throw DataError("'review_id' must be a nonempty string");
    if (!product.is_string()) throw DataError("'product_id' must be a string");
    if (!stars.is_number_integer()) throw DataError("'stars' must be an integer");
    if (!text.is_string()) throw DataError("'text' must be a string");
    r.review_id = id.get<std::string>();
    r.product_id = product.get<std::string>();
    r.stars = stars.get<int>();
    if (r.stars < 1 || r.stars > 5) throw DataError("'stars' must be in 1..5");
    r.text = text.get<std::string>();

    if (auto it = j.find("sent_ids"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw DataError("'sent_ids' must be an array of strings");
        for (const auto& s : *it) {
            if (!s.is_string()) throw DataError("'sent_ids' must be an array of strings");
            r.sent_ids.push_back(s.get<std::string>());
        }
    }
    if (auto it = j.find("gold_emotion"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw DataError("'gold_emotion' must be a string");
        r.gold_emotion = parse_emotion(it->get<std::string>());
        if (!r.gold_emotion) throw DataError("unknown gold_emotion '" + it->get<std::string>() + "'");
    }
    if (auto it = j.find("gold_cause"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw DataError("'gold_cause' must be an object");
        GoldCause c{index_field(*it, "sentence_index"), index_field(*it, "start"), index_field(*it, "end")};
        if (c.start > c.end) throw DataError("'gold_cause' start exceeds end");
        r.gold_cause = c;
    }
    if (r.gold_emotion.has_value() != r.gold_cause.has_value())
        throw DataError("gold_emotion and gold_cause must be given together");
    return r;
}

}  // namespace

std::vector<ReviewRecord> read_corpus(std::istream& in)
{
    std::vector<ReviewRecord> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto record = parse_record(json::parse(line));
            if (!ids.insert(record.review_id).second)
                throw DataError("duplicate review_id '" + record.review_id + "'");
            out.push_back(std::move(record));
        } catch (const json::exception& e) {
            throw DataError("corpus line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
        } catch (const DataError& e) {
            throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<ReviewRecord> load_corpus(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus " + path.string());
    try {
        return read_corpus(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_corpus(const std::vector<ReviewRecord>& records, std::ostream& out)
{
    for (const auto& r : records) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        j["review_id"] = r.review_id;
        j["product_id"] = r.product_id;
        j["stars"] = r.stars;
        j["text"] = r.text;
        if (!r.sent_ids.empty()) j["sent_ids"] = r.sent_ids;
        if (r.gold_emotion) j["gold_emotion"] = std::string(emotion_name(*r.gold_emotion));
        if (r.gold_cause)
            j["gold_cause"] = {{"sentence_index", r.gold_cause->sentence_index},
                               {"start", r.gold_cause->start},
                               {"end", r.gold_cause->end}};
        out << j.dump() << '\n';
    }
}

}  // namespace ecpe
