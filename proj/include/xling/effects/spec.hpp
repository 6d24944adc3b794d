#pragma once

#include <string>
#include <string_view>

#include "xling/error.hpp"
#include "xling/glm/design.hpp"
#include "xling/types.hpp"

namespace xling::effects {

enum class ModelId { M1, M2, M3, M4 };

inline constexpr const char* kModel = "Model";
inline constexpr const char* kLabel = "Label";
inline constexpr const char* kLanguage = "Language";
inline constexpr const char* kSplit = "Split";
inline constexpr const char* kQuality = "TranslationQuality";
inline constexpr const char* kShareUnrelated = "ShareUnrelated";

inline int model_number(ModelId id) { return static_cast<int>(id) + 1; }

inline ModelId model_id_from_number(int n) {
    if (n < 1 || n > 4) throw ConfigError("regression model must be 1, 2, 3 or 4 (got " + std::to_string(n) + ")");
    return static_cast<ModelId>(n - 1);
}

inline std::string_view model_title(ModelId id) {
    switch (id) {
        case ModelId::M1: return "Model 1: main effects only";
        case ModelId::M2: return "Model 2: Model x Label";
        case ModelId::M3: return "Model 3: Model x Language";
        case ModelId::M4: return "Model 4: Model x ShareUnrelated + Model x Language";
    }
    return "?";
}

inline std::string model_term(ModelVariant v) { return glm::dummy_name(kModel, std::string(to_string(v))); }
inline std::string language_term(Language l) { return glm::dummy_name(kLanguage, std::string(to_string(l))); }
inline std::string label_term(Stance s) { return glm::dummy_name(kLabel, std::string(to_string(s))); }

// Baseline: English model, neutral label, English text, training split, untranslated.
inline glm::RegressionSpec make_spec(ModelId id) {
    glm::RegressionSpec s;
    s.response = "Correct";
    const glm::FactorSpec model{kModel, "English", {"EnglishSpanish", "Multilanguage", "Spanish"}};
    const glm::FactorSpec label{kLabel, "neutral", {"unrelated", "anti", "pro"}};
    const glm::FactorSpec language{
        kLanguage, "en", {"ar", "fr", "de", "hi", "hu", "id", "it", "ko", "pl", "pt", "es", "tr"}};
    const glm::FactorSpec split{kSplit, "train", {"test"}};
    const glm::FactorSpec quality{kQuality, "not_translated", {"bad", "good", "unknown"}};

    if (id == ModelId::M4) {
        s.factors = {model, language, split, quality};
        s.covariates = {kShareUnrelated};
        s.interactions = {{kModel, kLanguage}, {kModel, kShareUnrelated}};
    } else {
        s.factors = {model, label, language, split, quality};
        if (id == ModelId::M2) s.interactions = {{kModel, kLabel}};
        if (id == ModelId::M3) s.interactions = {{kModel, kLanguage}};
    }
    return s;
}

} // namespace xling::effects
