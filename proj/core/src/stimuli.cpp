#include "wuglab/stimuli.hpp"

#include "wuglab/util.hpp"

namespace wuglab {

const std::vector<WugItem>& builtin_stimuli() {
    static const std::vector<WugItem> items = {
        {"Bral", true},    {"Kach", true},    {"Klot", true},   {"Mur", true},
        {"Nuhl", true},    {"Pind", true},    {"Pisch", true},  {"Pund", true},
        {"Raun", true},    {"Spand", true},   {"Spert", true},  {"Vag", true},
        {"Bnaupf", false}, {"Bneik", false},  {"Bnöhk", false}, {"Fnahf", false},
        {"Fneik", false},  {"Fnöhk", false}, {"Plaupf", false}, {"Pleik", false},
        {"Pläk", false},  {"Pnähf", false}, {"Pröng", false}, {"Snauk", false},
    };
    return items;
}

std::vector<WugItem> parse_stimuli(const std::string& text) {
    std::vector<WugItem> items;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2)
            throw ParseError("stimulus file line " + std::to_string(line_no) + ": expected `form,flag`");
        const std::string flag = trim(cols[1]);
        bool rhyme;
        if (flag == "R" || flag == "1")
            rhyme = true;
        else if (flag == "NR" || flag == "0")
            rhyme = false;
        else
            throw DataError("stimulus file line " + std::to_string(line_no) + ": flag must be R/NR/1/0, got '" +
                            flag + "'");
        items.push_back({trim(cols[0]), rhyme});
    }
    return items;
}

std::vector<std::string> stimulus_forms(const std::vector<WugItem>& items) {
    std::vector<std::string> forms;
    forms.reserve(items.size());
    for (const auto& it : items) forms.push_back(it.orth);
    return forms;
}

}  // namespace wuglab
