// Writes the replay cache used by the tests and the offline CLI: one
// recorded completion per size category and per (action, category) contact
// query.
#include "hoi/priors/cache.hpp"
#include "hoi/priors/client.hpp"
#include "hoi/priors/templates.hpp"

#include <filesystem>
#include <iostream>

namespace {

constexpr const char* kRecordedAt = "2022-10-03T12:00:00Z";

const std::pair<const char*, const char*> kSizes[] = {
    {"backpack", " 0.5m"},  {"bag", " 0.5m"},        {"bed", " 2.0m"},        {"bottle", " 0.3m"},
    {"bowl", " 0.15m"},     {"chair", " 0.85m"},     {"clock", " 0.3m"},      {"couch", " 0.91m"},
    {"cup", " 0.1m"},       {"desk", " 0.75m"},      {"door", " 2.1m"},       {"handbag", " 0.3m"},
    {"hat", " 0.3m"},       {"keyboard", " 0.61m"},  {"knife", " 0.22m"},     {"microwave", " 0.5m"},
    {"mug", " 0.12m"},      {"scissors", " 0.2m\nLength of a pencil: 0.19m"}, {"suitcase", " 0.81m"},
    {"table", " 0.75m"},
};

struct ContactRow {
    const char* category;
    const char* action;
    const char* response;
};

const ContactRow kContacts[] = {
    {"chair", "sit", " seat/butt, back/back"},
    {"chair", "carry", " arms/hands, back/hands, seat/hands"},
    {"chair", "rest", " seat/butt, back/back\n\nAction: sleep\nObject: chair\nContacts: seat/butt"},
    {"chair", "stand on", " seat/foot"},
    {"chair", "stand next to", " back/hand"},
    {"chair", "sleep", " seat/butt, back/back"},
    {"table", "sit", " tabletop/butt, tabletop/left leg, \n          tabletop/right leg"},
    {"table", "work", " tabletop/hands"},
    {"table", "arrange", " top/hands"},
    {"table", "lay", " tabletop/body"},
    {"table", "place", " table top/hands"},
    {"backpack", "carry", " shoulder strap/hands, support/hands"},
    {"backpack", "backpack", " shoulder strap/shoulders, support/shoulders, bag body/back"},
    {"backpack", "mount", " shoulder strap/hands, shoulder strap/waist, support/hands, support/waist"},
    {"suitcase", "carry", " handle/hands"},
    {"suitcase", "pack", " zipper/hands"},
    {"suitcase", "lug", " handle/hands"},
    {"suitcase", "throw", " handle/hands"},
    {"scissors", "cut", " blade handle/hands, handle/hands"},
    {"scissors", "pass", " blade/hands, blade handle/hands, handle/hands, securing clip/hands"},
    {"keyboard", "type", " key/hands"},
    {"keyboard", "play", " keys/hands"},
    {"keyboard", "control", " key/hands"},
    {"keyboard", "enter", " key/fingers"},
    {"bowl", "hold", " bowl/hands"},
    {"bowl", "serve", " bowl/hands"},
    {"bowl", "eat", " bowl/mouth"},
    {"bowl", "wash", " bowl/hands"},
};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_prior_fixtures <out.jsonl>\n";
        return 2;
    }
    const std::filesystem::path out = argv[1];
    std::filesystem::remove(out);
    hoi::PromptCache cache(out);
    const std::string model(hoi::kDefaultCompletionModel);
    for (const auto& [category, response] : kSizes)
        cache.append({std::string(hoi::kObjectSizeTemplateId), hoi::render_size_prompt(category), response, model, kRecordedAt});
    for (const auto& row : kContacts)
        cache.append({std::string(hoi::kContactTemplateId), hoi::render_contact_prompt(row.action, row.category),
                      row.response, model, kRecordedAt});
    std::cout << "wrote " << cache.size() << " records to " << out << '\n';
}
