#pragma once

#include "hoi/common.hpp"

#include <string>
#include <string_view>

namespace hoi {

// Prompt texts, kept byte-identical with data/prompts/*.txt.
inline constexpr std::string_view kObjectSizeTemplate =
    "This is an object length estimator.\n"
    "Length of a bike: 1.75m\n"
    "Height of a woman: 1.63m\n"
    "Length of a OBJECT:";

inline constexpr std::string_view kContactTemplate =
    "This is a body-object contact generator.\n"
    "\n"
    "Action: ride\n"
    "Object: bike\n"
    "Contacts: handlebar/hands, seat/butt, \n"
    "          paddle/foot\n"
    "\n"
    "Action: walk \n"
    "Object: bike\n"
    "Contacts: handlebar/hands\n"
    "\n"
    "Action: sit\n"
    "Object: sofa\n"
    "Contacts: seat/butt, back/back\n"
    "\n"
    "Action: stand\n"
    "Object: sofa\n"
    "Contacts: seat/foot\n"
    "\n"
    "Action: kick\n"
    "Object: soccer\n"
    "Contacts: soccer/foot\n"
    "\n"
    "Action: carry\n"
    "Object: soccer\n"
    "Contacts: soccer/hands\n"
    "\n"
    "Action: ACTION\n"
    "Object: OBJECT\n"
    "Contacts:";

// Fallback label-mapping prompt for part names the tables do not cover.
inline constexpr std::string_view kPartMappingTemplate =
    "Map the part name to the closest label in the list.\n"
    "Labels: LABELS\n"
    "Part: PART\n"
    "Label:";

inline constexpr std::string_view kObjectSizeTemplateId = "object-size";
inline constexpr std::string_view kContactTemplateId = "contacts";
inline constexpr std::string_view kPartMappingTemplateId = "part-mapping";

/// Replaces the last occurrence of `placeholder`; the placeholders only
/// appear once, at the query slot.
inline std::string fill_placeholder(std::string text, std::string_view placeholder, std::string_view value) {
    const auto pos = text.rfind(placeholder);
    require(pos != std::string::npos, "template lacks placeholder " + std::string(placeholder));
    text.replace(pos, placeholder.size(), value);
    return text;
}

inline std::string render_size_prompt(std::string_view category) {
    require(!category.empty(), "object category must be non-empty");
    return fill_placeholder(std::string(kObjectSizeTemplate), "OBJECT", category);
}

inline std::string render_contact_prompt(std::string_view action, std::string_view category) {
    require(!action.empty() && !category.empty(), "action and object category must be non-empty");
    return fill_placeholder(fill_placeholder(std::string(kContactTemplate), "OBJECT", category), "ACTION", action);
}

inline std::string render_part_mapping_prompt(std::string_view part, const std::string& labels) {
    return fill_placeholder(fill_placeholder(std::string(kPartMappingTemplate), "PART", part), "LABELS", labels);
}

}  // namespace hoi
