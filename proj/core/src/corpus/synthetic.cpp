#include "psyrisk/corpus/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "psyrisk/errors.hpp"
#include "psyrisk/random.hpp"
#include "psyrisk/text/porter.hpp"

namespace psyrisk {

namespace {

std::vector<std::string> words_of(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

SyntheticDomainSpec domain_spec(std::string_view keywords, std::string_view related,
                                std::vector<std::string> keyphrases, std::size_t count)
{
    return {words_of(keywords), words_of(related), std::move(keyphrases), count};
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& values)
{
    return values[rng.below(values.size())];
}

std::string render_text(const std::vector<std::string>& words, Rng& rng)
{
    std::string text;
    std::size_t since_break = 0;
    bool capitalize = true;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            text.push_back(' ');
        }
        std::string w = words[i];
        if (capitalize) {
            w[0] = static_cast<char>(w[0] - 'a' + 'A');
            capitalize = false;
        }
        text += w;
        ++since_break;
        if (i + 1 < words.size() && since_break >= 6 && rng.bernoulli(0.25)) {
            text.push_back('.');
            since_break = 0;
            capitalize = true;
        } else if (i + 1 < words.size() && rng.bernoulli(0.04)) {
            text.push_back(',');
        }
    }
    text.push_back('.');
    return text;
}

/// Noise filler with domain segments dropped in at random slots; each
/// segment stays contiguous so keyphrases survive intact.
std::vector<std::string> assemble(const std::vector<std::vector<std::string>>& segments,
                                  std::size_t target_length, const SyntheticConfig& config,
                                  Rng& rng)
{
    std::size_t content = 0;
    for (const auto& s : segments) {
        content += s.size();
    }
    const std::size_t filler = target_length > content + 3 ? target_length - content : 3;

    std::vector<double> cumulative(config.noise.size());
    double total = 0.0;
    for (std::size_t r = 0; r < cumulative.size(); ++r) {
        total += std::pow(static_cast<double>(r + 1), -config.noise_zipf_exponent);
        cumulative[r] = total;
    }
    std::vector<std::vector<std::string>> items = segments;
    for (std::size_t i = 0; i < filler; ++i) {
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), rng.uniform() * total);
        const auto r = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                             cumulative.size() - 1);
        items.push_back({config.noise[r]});
    }
    rng.shuffle(items);

    std::vector<std::string> words;
    for (auto& item : items) {
        words.insert(words.end(), item.begin(), item.end());
    }
    return words;
}

std::string paragraph_id(std::string_view prefix, std::uint64_t seed, std::size_t index)
{
    std::ostringstream id;
    id << prefix << seed << '-';
    id.width(6);
    id.fill('0');
    id << index;
    return id.str();
}

}  // namespace

SyntheticConfig SyntheticConfig::standard()
{
    SyntheticConfig c;
    const std::size_t n = 200;
    c.domains[domain_index(Domain::Appearance)] = domain_spec(
        "disheveled clothing groomed wearing unkempt hygiene attire makeup tattoos shaven",
        "posture gait jewelry dressed tidy malodorous piercings haircut scruffy sweatpants "
        "mannerisms slumped",
        {"eye contact", "stated age", "unusual motor activity", "obsessive body image",
         "well appearing", "poor eye"},
        n);
    c.domains[domain_index(Domain::ThoughtContent)] = domain_spec(
        "preoccupation delusion grandiose ideation suicidal paranoid hallucinations homicidal "
        "phobia compulsions",
        "voices persecutory intrusive ruminating fixated bizarre somatic nihilistic telepathic "
        "conspiracy",
        {"ideas of reference", "thought insertion", "fear surrounding daughter", "harm to others",
         "self harm", "special powers"},
        n);
    c.domains[domain_index(Domain::Interpersonal)] = domain_spec(
        "boyfriend relationship peers family parents social girlfriend roommate siblings marriage",
        "friendships conflict isolated lonely dating divorce affectionate estranged mother cousins",
        {"romantic interest", "support network", "living situation", "close friend",
         "legal guardian", "group home"},
        n);
    c.domains[domain_index(Domain::Mood)] = domain_spec(
        "anxious calm depressed labile irritable euphoric tearful hopeless dysphoric elated",
        "sadness worry mood affect crying guilt worthless apathy anhedonia cheerful",
        {"panic attack", "cope with mania", "feels exhausted", "low energy", "blunted range",
         "wide ranging"},
        n);
    c.domains[domain_index(Domain::Occupation)] = domain_spec(
        "boss employed job school class homework work college career semester",
        "internship salary manager tuition exams coworkers shifts interview grades lectures",
        {"leave of absence", "part time", "full time", "dropped out", "financial aid",
         "performance review"},
        n);
    c.domains[domain_index(Domain::ThoughtProcess)] = domain_spec(
        "tangential prosody blocking perseverant circumstantial disorganized incoherent "
        "derailment logical neologisms",
        "concrete rambling hesitant latency clanging verbose digressive scattered slowed racing",
        {"linear thinking", "goal directed", "flight of ideas", "paucity of thought",
         "loose associations", "short attention span"},
        n);
    c.domains[domain_index(Domain::Substance)] = domain_spec(
        "cocaine marijuana etoh addiction narcotic alcohol heroin opioids cannabis methamphetamine",
        "intoxicated withdrawal sober relapse overdose drinking smoking detox binge hangover",
        {"needle use", "drug screen", "use disorder", "positive tox", "street drugs",
         "using substances"},
        n);

    c.noise = words_of(
        "the a and of to in was is with for on has at he she they her his their had been will "
        "patient reports states today about also noted after before during per denies endorses "
        "week day time plan visit note medication discussed follow continue home morning evening "
        "month dose session review clinician writer met seen appointment call phone scheduled "
        "next return group program team current recent history past present reviewed given "
        "received mg daily nightly labs blood pressure vitals stable sleep appetite weight eating "
        "overall general remains further okay father brother weekend travel car breakfast lunch "
        "dinner walk weather outside inside room floor unit staff nurse doctor provider chart "
        "record form pharmacy refill prescription insurance transport bus ride arrived left "
        "early late hours minutes yesterday tomorrow friday monday summer winter city town "
        "apartment kitchen television music movie book game exercise gym "
        // keyphrase constituents
        "eye contact stated age unusual motor activity obsessive body image well appearing poor "
        "ideas reference thought insertion fear surrounding daughter harm others self special "
        "powers romantic interest support network living situation close friend legal guardian "
        "panic attack cope mania feels exhausted low energy blunted range wide ranging leave "
        "absence part full dropped out financial aid performance linear thinking goal directed "
        "flight paucity loose associations short attention span needle use drug screen disorder "
        "positive tox street drugs using substances");
    std::set<std::string> seen;
    std::erase_if(c.noise, [&seen](const std::string& w) { return !seen.insert(w).second; });
    c.noise_zipf_exponent = 1.0;

    c.other_count = 100;
    c.multilabel_fraction = 0.15;
    c.mwe_only_fraction = 0.35;
    c.keyphrase_rate = 0.1;
    c.min_keyphrases = 1;
    c.max_keyphrases = 2;
    c.min_related = 2;
    c.max_related = 3;
    c.min_words = 8;
    c.max_words = 16;
    return c;
}

std::size_t SyntheticConfig::total_paragraphs() const
{
    std::size_t total = other_count;
    for (const auto& d : domains) {
        total += d.count;
    }
    return total;
}

void SyntheticConfig::validate() const
{
    auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
    if (min_keyphrases == 0 || max_keyphrases < min_keyphrases) {
        throw ConfigError("synthetic keyphrase count range is invalid");
    }
    if (max_related < min_related) {
        throw ConfigError("synthetic related-word count range is invalid");
    }
    if (!in_unit(multilabel_fraction) || !in_unit(mwe_only_fraction) || !in_unit(keyphrase_rate)) {
        throw ConfigError("synthetic fractions must lie in [0, 1]");
    }
    if (min_words == 0 || min_words > max_words) {
        throw ConfigError("synthetic paragraph length range is invalid");
    }
    if (noise.empty()) {
        throw ConfigError("synthetic noise pool is empty");
    }
    if (!std::isfinite(noise_zipf_exponent) || noise_zipf_exponent < 0.0) {
        throw ConfigError("synthetic noise Zipf exponent must be finite and non-negative");
    }

    // stem -> owner ("noise" or a domain name)
    std::map<std::string, std::string> owner;
    auto claim = [&owner](const std::string& word, const std::string& who) {
        if (word.empty() || !std::all_of(word.begin(), word.end(),
                                         [](char ch) { return ch >= 'a' && ch <= 'z'; })) {
            throw ConfigError("synthetic vocabulary word '" + word + "' must be lowercase letters");
        }
        auto [it, inserted] = owner.emplace(porter_stem(word), who);
        if (!inserted && it->second != who) {
            throw ConfigError("synthetic word '" + word + "' (" + who + ") shares its stem with "
                              + it->second + " vocabulary");
        }
    };
    for (const auto& w : noise) {
        claim(w, "noise");
    }
    const std::set<std::string> noise_set(noise.begin(), noise.end());
    for (auto d : kRiskDomains) {
        const auto& spec = domains[domain_index(d)];
        const std::string name(domain_name(d));
        if (spec.count == 0) {
            throw ConfigError("synthetic count for " + name + " must be at least 1");
        }
        if (spec.keywords.empty() || spec.related.empty() || spec.keyphrases.empty()) {
            throw ConfigError("synthetic pools for " + name + " must be non-empty");
        }
        for (const auto& w : spec.keywords) {
            claim(w, name);
        }
        for (const auto& w : spec.related) {
            claim(w, name);
        }
        for (const auto& p : spec.keyphrases) {
            for (const auto& w : parse_phrase(p, d).words) {
                if (!noise_set.contains(w)) {
                    throw ConfigError("keyphrase word '" + w + "' of '" + p
                                      + "' must come from the noise pool");
                }
            }
        }
    }
    lexicon().validate();
}

KeywordLexicon SyntheticConfig::lexicon() const
{
    KeywordLexicon lex;
    for (auto d : kRiskDomains) {
        const auto& spec = domains[domain_index(d)];
        lex[d].keywords = spec.keywords;
        for (const auto& p : spec.keyphrases) {
            lex[d].keyphrases.push_back(parse_phrase(p, d));
        }
    }
    return lex;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config, std::uint64_t seed)
{
    config.validate();
    Rng rng(mix_seed(seed, 0x5e7));

    std::vector<Domain> primaries;
    for (auto d : kRiskDomains) {
        primaries.insert(primaries.end(), config.domains[domain_index(d)].count, d);
    }
    const std::size_t risk_total = primaries.size();
    primaries.insert(primaries.end(), config.other_count, Domain::Other);
    rng.shuffle(primaries);

    std::vector<std::size_t> risk_positions;
    for (std::size_t i = 0; i < primaries.size(); ++i) {
        if (is_risk_domain(primaries[i])) {
            risk_positions.push_back(i);
        }
    }
    rng.shuffle(risk_positions);
    const auto n_multi = static_cast<std::size_t>(
        std::llround(config.multilabel_fraction * static_cast<double>(risk_total)));
    std::vector<bool> multilabel(primaries.size(), false);
    for (std::size_t i = 0; i < n_multi; ++i) {
        multilabel[risk_positions[i]] = true;
    }

    SyntheticCorpus out;
    out.lexicon = config.lexicon();
    out.paragraphs.reserve(primaries.size());
    out.gold.reserve(primaries.size());

    for (std::size_t i = 0; i < primaries.size(); ++i) {
        const Domain primary = primaries[i];
        std::vector<Domain> labels{primary};
        std::vector<std::vector<std::string>> segments;

        if (is_risk_domain(primary)) {
            const auto& spec = config.domains[domain_index(primary)];
            if (rng.bernoulli(config.mwe_only_fraction)) {
                const std::size_t n_related =
                    config.min_related + rng.below(config.max_related - config.min_related + 1);
                for (std::size_t k = 0; k < n_related; ++k) {
                    segments.push_back({pick(rng, spec.related)});
                }
                const std::size_t n_phrases = std::min<std::size_t>(
                    config.min_keyphrases + rng.below(config.max_keyphrases - config.min_keyphrases + 1),
                    spec.keyphrases.size());
                std::vector<std::string> phrases = spec.keyphrases;
                rng.shuffle(phrases);
                for (std::size_t k = 0; k < n_phrases; ++k) {
                    segments.push_back(words_of(phrases[k]));
                }
            } else {
                const std::size_t n_keywords = 2 + rng.below(2);
                for (std::size_t k = 0; k < n_keywords; ++k) {
                    segments.push_back({pick(rng, spec.keywords)});
                }
                if (rng.bernoulli(config.keyphrase_rate)) {
                    segments.push_back(words_of(pick(rng, spec.keyphrases)));
                }
            }
            if (multilabel[i]) {
                auto secondary = kRiskDomains[rng.below(kNumRiskDomains - 1)];
                if (domain_index(secondary) >= domain_index(primary)) {
                    secondary = kRiskDomains[domain_index(secondary) + 1];
                }
                const auto& sec = config.domains[domain_index(secondary)];
                const std::size_t j = rng.below(sec.keywords.size() + sec.related.size());
                segments.push_back({j < sec.keywords.size() ? sec.keywords[j]
                                                            : sec.related[j - sec.keywords.size()]});
                labels.push_back(secondary);
            }
        }

        const std::size_t length =
            config.min_words + rng.below(config.max_words - config.min_words + 1);
        const auto words = assemble(segments, length, config, rng);

        Paragraph p{paragraph_id("syn", seed, i), render_text(words, rng), Source::Synthetic};
        out.gold.push_back({p, labels});
        out.paragraphs.push_back(std::move(p));
    }
    return out;
}

std::vector<Paragraph> generate_noise_paragraphs(const SyntheticConfig& config, std::size_t count,
                                                 std::uint64_t seed)
{
    config.validate();
    Rng rng(mix_seed(seed, 0x0e15e));
    std::vector<Paragraph> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t length =
            config.min_words + rng.below(config.max_words - config.min_words + 1);
        const auto words = assemble({}, length, config, rng);
        out.push_back({paragraph_id("noise", seed, i), render_text(words, rng), Source::Synthetic});
    }
    return out;
}

}  // namespace psyrisk
