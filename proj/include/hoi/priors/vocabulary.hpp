#pragma once

#include "hoi/common.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace hoi {

/// Label set plus free-text synonyms (synonym key -> label).
struct PartVocabulary {
    std::vector<std::string> labels;
    std::map<std::string, std::string> synonyms;

    bool contains(const std::string& label) const {
        return std::find(labels.begin(), labels.end(), label) != labels.end();
    }
};

/// Lower case, '_' and '-' read as blanks, runs of blanks collapsed, trimmed.
inline std::string part_label_key(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

namespace detail {

struct CategoryParts {
    const char* category;
    std::vector<const char*> labels;
    std::vector<std::pair<const char*, const char*>> synonyms;
};

inline const std::vector<CategoryParts>& object_part_tables() {
    static const std::vector<CategoryParts> tables = {
        {"chair",
         {"chair seat", "chair back", "chair arms", "chair base"},
         {{"seat", "chair seat"}, {"seat cushion", "chair seat"}, {"back", "chair back"}, {"backrest", "chair back"},
          {"back rest", "chair back"}, {"arms", "chair arms"}, {"arm", "chair arms"}, {"armrest", "chair arms"},
          {"armrests", "chair arms"}, {"chair arm", "chair arms"}, {"base", "chair base"}, {"legs", "chair base"},
          {"leg", "chair base"}, {"chair legs", "chair base"}}},
        {"table",
         {"tabletop", "table base"},
         {{"top", "tabletop"}, {"table top", "tabletop"}, {"surface", "tabletop"}, {"board", "tabletop"},
          {"base", "table base"}, {"legs", "table base"}, {"leg", "table base"}, {"table legs", "table base"}}},
        {"backpack",
         {"shoulder strap", "support", "bag body"},
         {{"strap", "shoulder strap"}, {"straps", "shoulder strap"}, {"shoulder straps", "shoulder strap"},
          {"body", "bag body"}, {"bag", "bag body"}, {"main body", "bag body"}, {"frame", "support"}}},
        {"suitcase",
         {"handle", "zipper", "suitcase body", "wheel"},
         {{"handles", "handle"}, {"grip", "handle"}, {"zip", "zipper"}, {"zippers", "zipper"},
          {"body", "suitcase body"}, {"wheels", "wheel"}}},
        {"scissors",
         {"blade", "blade handle", "handle", "securing clip"},
         {{"blades", "blade"}, {"handles", "handle"}, {"finger holes", "handle"}, {"clip", "securing clip"},
          {"pivot", "securing clip"}}},
        {"keyboard",
         {"key", "keyboard frame"},
         {{"keys", "key"}, {"keycap", "key"}, {"keycaps", "key"}, {"frame", "keyboard frame"}, {"case", "keyboard frame"}}},
        {"bowl", {"bowl"}, {{"rim", "bowl"}, {"bowl body", "bowl"}, {"container", "bowl"}}},
    };
    return tables;
}

inline const CategoryParts* find_category_parts(std::string_view category) {
    const std::string key = part_label_key(category);
    for (const auto& t : object_part_tables())
        if (key == t.category) return &t;
    return nullptr;
}

}  // namespace detail

/// Body-part labels shared with the built-in body model's regions.
inline const std::vector<std::string>& body_part_labels() {
    static const std::vector<std::string> labels = {
        "butt",        "hips",          "back",        "belly",        "chest",         "shoulders",
        "neck",        "head",          "mouth",       "left upper arm", "right upper arm", "left forearm",
        "right forearm", "left hand",   "right hand",  "left thigh",   "right thigh",   "left shin",
        "right shin",  "left foot",     "right foot",  "hands",        "feet",          "left leg",
        "right leg",   "legs",          "left arm",    "right arm",    "arms",          "waist",
        "torso",       "body"};
    return labels;
}

inline const std::map<std::string, std::string>& body_part_synonyms() {
    static const std::map<std::string, std::string> synonyms = {
        {"foot", "feet"},        {"toes", "feet"},         {"hand", "hands"},       {"palm", "hands"},
        {"palms", "hands"},      {"fingers", "hands"},     {"bottom", "butt"},      {"buttocks", "butt"},
        {"buttock", "butt"},     {"bum", "butt"},          {"spine", "back"},       {"upper back", "back"},
        {"lower back", "back"},  {"shoulder", "shoulders"}, {"arm", "arms"},       {"leg", "legs"},
        {"lap", "legs"},         {"thighs", "legs"},       {"hip", "hips"},         {"stomach", "belly"},
        {"abdomen", "belly"},    {"lips", "mouth"},        {"face", "head"},        {"whole body", "body"},
        {"entire body", "body"}, {"full body", "body"},    {"trunk", "torso"},      {"breast", "chest"}};
    return synonyms;
}

inline PartVocabulary body_vocabulary() { return {body_part_labels(), body_part_synonyms()}; }

/// Vocabulary over an explicit label list (e.g. a body model's regions).
inline PartVocabulary body_vocabulary(std::vector<std::string> labels) {
    PartVocabulary v{std::move(labels), {}};
    for (const auto& [from, to] : body_part_synonyms())
        if (v.contains(to)) v.synonyms[from] = to;
    return v;
}

inline bool has_object_vocabulary(std::string_view category) { return detail::find_category_parts(category) != nullptr; }

/// Built-in part vocabulary of a known category.
inline PartVocabulary object_vocabulary(std::string_view category) {
    const auto* t = detail::find_category_parts(category);
    if (!t) fail(ErrorKind::InvalidInput, "no built-in part vocabulary for category \"" + std::string(category) + "\"");
    PartVocabulary v;
    for (const char* l : t->labels) v.labels.emplace_back(l);
    for (const auto& [from, to] : t->synonyms) v.synonyms[from] = to;
    return v;
}

/// Vocabulary over the part names of a concrete mesh; the category's
/// synonyms are kept where their targets exist in the mesh.
inline PartVocabulary object_vocabulary(std::string_view category, std::vector<std::string> part_names) {
    PartVocabulary v{std::move(part_names), {}};
    if (const auto* t = detail::find_category_parts(category))
        for (const auto& [from, to] : t->synonyms)
            if (v.contains(to)) v.synonyms[from] = to;
    return v;
}

}  // namespace hoi
