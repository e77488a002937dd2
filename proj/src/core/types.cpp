#include "jot/core/types.hpp"

#include <algorithm>
#include <cctype>

namespace jot {
namespace {

std::string folded_trimmed(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!out.empty() && is_space(static_cast<unsigned char>(out.front()))) out.erase(out.begin());
    while (!out.empty() && is_space(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
}

} // namespace

Label opposite(Label label) {
    return label == Label::Positive ? Label::Negative : Label::Positive;
}

std::string to_string(Label label) {
    return label == Label::Positive ? "positive" : "negative";
}

std::string to_string(const Prediction& prediction) {
    return prediction ? to_string(*prediction) : "unparseable";
}

Label label_from_string(const std::string& text) {
    if (text == "positive") return Label::Positive;
    if (text == "negative") return Label::Negative;
    throw std::invalid_argument("unknown label: " + text);
}

Prediction prediction_from_string(const std::string& text) {
    if (text == "unparseable") return std::nullopt;
    return label_from_string(text);
}

std::string to_string(RoleId role) {
    switch (role) {
        case RoleId::Lawyer: return "lawyer";
        case RoleId::Prosecutor: return "prosecutor";
        case RoleId::Judge: return "judge";
    }
    throw std::logic_error("invalid RoleId");
}

RoleId role_from_string(const std::string& text) {
    if (text == "lawyer") return RoleId::Lawyer;
    if (text == "prosecutor") return RoleId::Prosecutor;
    if (text == "judge") return RoleId::Judge;
    throw std::invalid_argument("unknown role: " + text);
}

PositionPair::PositionPair(std::string positive, std::string negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
    if (positive_.empty() || negative_.empty()) {
        throw std::invalid_argument("position strings must be non-empty");
    }
    if (folded_trimmed(positive_) == folded_trimmed(negative_)) {
        throw std::invalid_argument("positions must differ after case-folding and trimming: \"" +
                                    positive_ + "\" vs \"" + negative_ + "\"");
    }
}

const std::string& PositionPair::text_for(Label label) const {
    return label == Label::Positive ? positive_ : negative_;
}

} // namespace jot
