#include "jot/provider/scripted.hpp"

#include <json.hpp>

#include "jot/core/transcript.hpp"
#include "jot/provider/errors.hpp"

namespace jot::provider {

ScriptedBackend::ScriptedBackend(KeyedTag, KeyedScript script,
                                 std::shared_ptr<UsageLedger> ledger,
                                 std::shared_ptr<TokenBudget> budget)
    : Backend(std::move(ledger), std::move(budget)), keyed_mode_(true) {
    for (auto& [key, responses] : script) {
        keyed_.emplace(key, std::deque<std::string>(responses.begin(), responses.end()));
    }
}

ScriptedBackend::ScriptedBackend(FlatTag, std::vector<std::string> responses,
                                 std::shared_ptr<UsageLedger> ledger,
                                 std::shared_ptr<TokenBudget> budget)
    : Backend(std::move(ledger), std::move(budget)),
      flat_(responses.begin(), responses.end()) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::keyed(KeyedScript script,
                                                        std::shared_ptr<UsageLedger> ledger,
                                                        std::shared_ptr<TokenBudget> budget) {
    return std::shared_ptr<ScriptedBackend>(
        new ScriptedBackend(KeyedTag{}, std::move(script), std::move(ledger), std::move(budget)));
}

std::shared_ptr<ScriptedBackend>
ScriptedBackend::keyed(const std::vector<std::pair<std::string, std::string>>& entries,
                       std::shared_ptr<UsageLedger> ledger, std::shared_ptr<TokenBudget> budget) {
    KeyedScript script;
    for (const auto& [key, response] : entries) {
        auto [it, inserted] = script.emplace(key, std::vector<std::string>{response});
        if (!inserted) throw std::invalid_argument("duplicate script key: " + key);
        (void)it;
    }
    return keyed(std::move(script), std::move(ledger), std::move(budget));
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::flat(std::vector<std::string> responses,
                                                       std::shared_ptr<UsageLedger> ledger,
                                                       std::shared_ptr<TokenBudget> budget) {
    return std::shared_ptr<ScriptedBackend>(new ScriptedBackend(
        FlatTag{}, std::move(responses), std::move(ledger), std::move(budget)));
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path,
                                                            std::shared_ptr<UsageLedger> ledger,
                                                            std::shared_ptr<TokenBudget> budget) {
    const auto doc = nlohmann::json::parse(read_file(path));
    if (doc.contains("keyed")) {
        KeyedScript script;
        for (const auto& [key, value] : doc.at("keyed").items()) {
            std::vector<std::string> responses;
            if (value.is_string()) {
                responses.push_back(value.get<std::string>());
            } else if (value.is_array()) {
                for (const auto& item : value) responses.push_back(item.get<std::string>());
            } else {
                throw std::invalid_argument("script key \"" + key +
                                            "\" must map to a string or array of strings");
            }
            script.emplace(key, std::move(responses));
        }
        return keyed(std::move(script), std::move(ledger), std::move(budget));
    }
    if (doc.contains("flat")) {
        std::vector<std::string> responses;
        for (const auto& item : doc.at("flat")) responses.push_back(item.get<std::string>());
        return flat(std::move(responses), std::move(ledger), std::move(budget));
    }
    throw std::invalid_argument("script file must contain a \"keyed\" or \"flat\" section: " +
                                path.string());
}

std::string ScriptedBackend::next_response(const ChatRequest& request) {
    if (keyed_mode_) {
        std::lock_guard lock(mutex_);
        auto it = keyed_.find(request.tag.key());
        if (it == keyed_.end() || it->second.empty()) {
            throw ScriptExhausted("no scripted response for key \"" + request.tag.key() + "\"");
        }
        std::string response = std::move(it->second.front());
        it->second.pop_front();
        seen_.push_back(request);
        return response;
    }
    if (in_flat_call_.exchange(true)) {
        throw ProviderError("flat scripted backend called concurrently");
    }
    struct Release {
        std::atomic<bool>& flag;
        ~Release() { flag.store(false); }
    } release{in_flat_call_};
    std::lock_guard lock(mutex_);
    if (flat_.empty()) throw ScriptExhausted("flat script exhausted");
    std::string response = std::move(flat_.front());
    flat_.pop_front();
    seen_.push_back(request);
    return response;
}

std::string ScriptedBackend::complete(const ChatRequest& request) {
    validate_request(request);
    const std::int64_t prompt_tokens = estimate_prompt_tokens(request);
    budget_->charge(prompt_tokens);
    std::string response = next_response(request);
    const std::int64_t completion_tokens = estimate_tokens(response);
    budget_->charge(completion_tokens);

    CallRecord record;
    record.model = request.model.name;
    record.tag = request.tag;
    record.request_fingerprint = request_fingerprint(request);
    record.attempts = 1;
    record.prompt_tokens = prompt_tokens;
    record.completion_tokens = completion_tokens;
    ledger_->record(std::move(record));
    return response;
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
    std::lock_guard lock(mutex_);
    return seen_;
}

} // namespace jot::provider
