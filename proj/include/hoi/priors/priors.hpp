#pragma once

#include "hoi/priors/client.hpp"
#include "hoi/priors/parse.hpp"
#include "hoi/priors/templates.hpp"
#include "hoi/priors/vocabulary.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hoi {

struct SizePrior {
    std::string category;
    double size = 0.0;  // metres
};

inline constexpr double kMinObjectSize = 0.01;
inline constexpr double kMaxObjectSize = 10.0;

/// Object part / body part contact pairs for one action on one category.
struct InteractionMap {
    std::string action;
    std::string object_category;
    std::vector<ContactPair> pairs;  // unique, in response order
};

inline SizePrior query_object_size(std::string_view category, CompletionClient& client) {
    require(!category.empty(), "object category must be non-empty");
    const std::string response = client.complete(kObjectSizeTemplateId, render_size_prompt(category));
    const double size = parse_size_response(response);
    if (!(size >= kMinObjectSize && size <= kMaxObjectSize))
        fail(ErrorKind::SanityError, "size " + std::to_string(size) + " m for \"" + std::string(category) +
                                         "\" is outside [0.01, 10] m; completion: \"" + response + "\"");
    return {std::string(category), size};
}

/// Parsed but not normalized contact completion.
inline InteractionMap query_raw_contacts(std::string_view action, std::string_view category, CompletionClient& client) {
    require(!action.empty() && !category.empty(), "action and object category must be non-empty");
    const std::string response = client.complete(kContactTemplateId, render_contact_prompt(action, category));
    return {std::string(action), std::string(category), parse_contact_response(response)};
}

struct DroppedPair {
    ContactPair pair;
    std::string reason;  // "unmapped"
    std::string detail;
};

struct NormalizeOptions {
    CompletionClient* mapper = nullptr;  // label-mapping fallback prompt, optional
    std::vector<DroppedPair>* dropped = nullptr;
    std::ostream* log = nullptr;
};

/// Maps a free-text part name onto `vocab`: exact label (modulo case and
/// blanks), then synonym table, then the mapping prompt if a client is given.
inline std::optional<std::string> map_part_label(const std::string& text, const PartVocabulary& vocab,
                                                 CompletionClient* mapper = nullptr) {
    const std::string key = part_label_key(text);
    auto exact = [&](const std::string& k) -> std::optional<std::string> {
        for (const auto& label : vocab.labels)
            if (part_label_key(label) == k) return label;
        return std::nullopt;
    };
    if (auto hit = exact(key)) return hit;
    for (const auto& [from, to] : vocab.synonyms)
        if (part_label_key(from) == key && vocab.contains(to)) return to;
    if (!mapper) return std::nullopt;
    std::string labels;
    for (const auto& l : vocab.labels) labels += (labels.empty() ? "" : ", ") + l;
    try {
        const std::string response = mapper->complete(kPartMappingTemplateId, render_part_mapping_prompt(text, labels));
        return exact(part_label_key(response.substr(0, response.find('\n'))));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CacheMiss) throw;
        return std::nullopt;
    }
}

inline InteractionMap normalize_part_labels(const InteractionMap& map, const PartVocabulary& object_vocab,
                                            const PartVocabulary& body_vocab, const NormalizeOptions& options = {}) {
    require(!object_vocab.labels.empty() && !body_vocab.labels.empty(), "part vocabularies must be non-empty");
    InteractionMap out{map.action, map.object_category, {}};
    for (const auto& pair : map.pairs) {
        const auto obj = map_part_label(pair.object_part, object_vocab, options.mapper);
        const auto body = map_part_label(pair.body_part, body_vocab, options.mapper);
        if (!obj || !body) {
            DroppedPair d{pair, "unmapped", !obj ? "object part \"" + pair.object_part + "\"" : "body part \"" + pair.body_part + "\""};
            if (options.log)
                *options.log << "dropping contact " << pair.object_part << "/" << pair.body_part << ": " << d.reason
                             << " " << d.detail << '\n';
            if (options.dropped) options.dropped->push_back(std::move(d));
            continue;
        }
        ContactPair p{*obj, *body};
        if (std::find(out.pairs.begin(), out.pairs.end(), p) == out.pairs.end()) out.pairs.push_back(std::move(p));
    }
    if (out.pairs.empty())
        fail(ErrorKind::NormalizationFailure, "no contact pair of " + map.action + "/" + map.object_category +
                                                  " maps onto the part vocabularies");
    return out;
}

inline InteractionMap query_contacts(std::string_view action, std::string_view category, CompletionClient& client,
                                     const PartVocabulary& object_vocab, const PartVocabulary& body_vocab,
                                     const NormalizeOptions& options = {}) {
    return normalize_part_labels(query_raw_contacts(action, category, client), object_vocab, body_vocab, options);
}

/// Uses the built-in vocabularies of `category` and the body model.
inline InteractionMap query_contacts(std::string_view action, std::string_view category, CompletionClient& client) {
    return query_contacts(action, category, client, object_vocabulary(category), body_vocabulary());
}

enum class VoteClass { Correct, Uncertain, Incorrect };

inline std::string_view to_string(VoteClass c) {
    switch (c) {
        case VoteClass::Correct: return "correct";
        case VoteClass::Uncertain: return "uncertain";
        case VoteClass::Incorrect: return "incorrect";
    }
    return "unknown";
}

/// User-study verdict from the number of "yes" votes out of ten.
inline VoteClass classify_votes(int votes) {
    require(votes >= 0 && votes <= 10, "vote count must be in [0, 10], got " + std::to_string(votes));
    if (votes > 6) return VoteClass::Correct;
    if (votes >= 4) return VoteClass::Uncertain;
    return VoteClass::Incorrect;
}

}  // namespace hoi
