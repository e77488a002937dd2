#pragma once

#include <stdexcept>
#include <string>

namespace jot::provider {

class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Network failure or retryable HTTP status after the retry budget is spent.
class TransportError : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// Credential rejection; never retried.
class AuthError : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// The configured token ceiling was hit; the run aborts rather than truncate.
class BudgetExceeded : public ProviderError {
public:
    using ProviderError::ProviderError;
};

/// The scripted backend has no response left for this call.
class ScriptExhausted : public ProviderError {
public:
    using ProviderError::ProviderError;
};

} // namespace jot::provider
