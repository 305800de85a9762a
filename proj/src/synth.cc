// Copyright (c) 2026 BiasFST Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "biasfst/common.h"
#include "biasfst/synth.h"

namespace biasfst {

namespace {

using WordList = std::vector<std::string>;

constexpr size_t kTailSize = 150;

// Slot fillers are drawn with Zipf(1) weights in list order, so the first
// entries of each list dominate.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : rng_(seed) {}

  const std::string& Pick(const WordList& list) {
    auto& cdf = cdfs_[&list];
    if (cdf.empty()) {
      double acc = 0.0;
      for (size_t i = 0; i < list.size(); ++i) {
        acc += 1.0 / static_cast<double>(i + 1);
        cdf.push_back(acc);
      }
    }
    double u = rng_.Uniform() * cdf.back();
    size_t i = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    return list[std::min(i, list.size() - 1)];
  }

  size_t Index(size_t n) { return rng_.Index(n); }
  Rng& rng() { return rng_; }

 private:
  Rng rng_;
  std::map<const WordList*, std::vector<double>> cdfs_;
};

struct Grammar {
  std::vector<std::string> templates;
  std::map<std::string, WordList> slots;
};

Sentence Expand(const Grammar& g, Sampler& s) {
  const std::string& tmpl = g.templates[s.Index(g.templates.size())];
  Sentence out;
  for (const auto& tok : SplitWhitespace(tmpl)) {
    if (tok.size() > 2 && tok.front() == '{' && tok.back() == '}') {
      const auto& list = g.slots.at(tok.substr(1, tok.size() - 2));
      for (auto& w : SplitWhitespace(s.Pick(list))) out.push_back(std::move(w));
    } else {
      out.push_back(tok);
    }
  }
  return out;
}

std::string PseudoWord(Rng& rng);
std::vector<std::string> MakeEntities(Rng& rng, size_t n, std::set<std::string>& taken);

// Fixed templates plus a long tail of rare fillers, so the general text has
// realistic singleton statistics.
Grammar GeneralGrammar(Rng& rng) {
  Grammar g;
  g.templates = {
      "what is the weather in {city} {time}",
      "what is the weather like {time}",
      "will it rain in {city} {time}",
      "set a timer for {num} minutes",
      "set an alarm for {num} {ampm}",
      "wake me up at {num} {ampm} {time}",
      "play some {genre} music",
      "play {genre} music in the {room}",
      "tune into {station} radio",
      "play the news from {source}",
      "call {name}",
      "call {name} on speaker",
      "send a message to {name} saying {phrase}",
      "text {name} {phrase}",
      "turn {onoff} the {room} lights",
      "turn {onoff} the lights in the {room}",
      "change the lights to {color}",
      "set the thermostat to {num} degrees",
      "remind me to {task} {time}",
      "add {task} to my calendar {time}",
      "what is on my calendar {time}",
      "what time is it in {city}",
      "how long does it take to drive to {city}",
      "navigate to {place}",
      "how is the traffic to {place}",
      "find a {cuisine} restaurant near me",
      "book a table for {num} at a {cuisine} restaurant",
      "what movies are playing {time}",
      "what is the capital of {country}",
      "translate {word} to {language}",
      "how do you say {word} in {language}",
      "what sound does a {animal} make",
      "how many calories are in a {food}",
      "spell {word}",
      "what is {num} plus {num}",
      "tell me a joke",
      "read me the news",
      "who is {name}",
      "open the {room} door",
      "is the {room} window open",
      "what is the score of the {gteam} game",
      "did the {gteam} win {time}",
      "when do the {gteam} play {time}",
      "tune into the {gteam} game",
      "show me the {gteam} highlights",
      "add {gproduct} to my cart",
      "add {gproduct} to my shopping list",
      "order more {gproduct}",
      "what is the price of {gproduct}",
      "pay my {bill} bill",
      "find the nearest gas station",
      "how much is gas {time}",
      "send {num} dollars to {name}",
  };
  g.slots = {
      {"city", {"boston", "chicago", "denver", "seattle", "dallas", "phoenix", "austin",
                "portland", "miami", "atlanta", "houston", "detroit", "memphis", "nashville",
                "orlando", "tampa", "raleigh", "omaha", "tucson", "fresno", "oakland", "reno",
                "toledo", "madison", "spokane"}},
      {"time", {"today", "tomorrow", "tonight", "this morning", "this afternoon",
                "this evening", "on monday", "on tuesday", "on wednesday", "on thursday",
                "on friday", "on saturday", "on sunday", "next week", "this weekend"}},
      {"num", {"two", "five", "ten", "three", "four", "six", "seven", "eight", "nine",
               "twenty", "fifteen", "thirty", "twelve", "eleven", "forty", "fifty", "one"}},
      {"ampm", {"am", "pm"}},
      {"genre", {"jazz", "rock", "pop", "classical", "country", "blues", "reggae", "soul",
                 "funk", "metal", "folk", "disco"}},
      {"room", {"kitchen", "bedroom", "living room", "bathroom", "office", "garage",
                "hallway", "basement", "attic", "dining room"}},
      {"station", {"jazz", "news", "sports", "talk", "country", "classic", "public"}},
      {"source", {"npr", "bbc", "cnn", "reuters", "the local station"}},
      {"name", {"mom", "dad", "alice", "bob", "carol", "david", "emma", "frank", "grace",
                "henry", "isabel", "jack", "karen", "liam", "mia", "noah", "olivia", "peter",
                "quinn", "rachel", "sam", "tina", "victor", "wendy", "zoe"}},
      {"phrase", {"i am running late", "see you soon", "call me back", "on my way",
                  "happy birthday", "good night", "dinner is ready", "thank you"}},
      {"onoff", {"on", "off"}},
      {"color", {"blue", "red", "green", "white", "yellow", "purple", "orange", "pink"}},
      {"task", {"buy milk", "call mom", "water the plants", "take out the trash",
                "pay the rent", "walk the dog", "clean the house", "pick up the kids",
                "feed the cat", "check the mail"}},
      {"place", {"work", "home", "the airport", "the mall", "the station", "the library",
                 "the park", "the hospital", "the office", "the beach", "the gym",
                 "the school"}},
      {"cuisine", {"italian", "mexican", "chinese", "thai", "indian", "french", "greek",
                   "japanese", "korean", "spanish", "vietnamese"}},
      {"country", {"france", "spain", "italy", "germany", "japan", "china", "brazil",
                   "canada", "mexico", "egypt", "india", "kenya", "peru", "chile", "norway",
                   "sweden", "poland", "greece", "ireland", "australia"}},
      {"language", {"spanish", "french", "german", "italian", "japanese", "chinese",
                    "portuguese", "russian"}},
      {"word", {"hello", "goodbye", "thanks", "friend", "water", "apple", "house", "yellow",
                "beautiful", "tomorrow", "library", "butterfly", "necessary", "restaurant"}},
      {"animal", {"dog", "cat", "cow", "horse", "sheep", "duck", "lion", "tiger", "bear",
                  "wolf", "fox", "owl", "goat", "pig", "mouse", "frog"}},
      {"gteam", {"lakers", "yankees", "celtics", "bulls", "giants", "packers", "cowboys",
                 "patriots", "warriors", "dodgers", "rangers", "eagles"}},
      {"gproduct", {"milk", "eggs", "bread", "coffee", "bananas", "butter", "cheese",
                    "apples", "paper towels", "soap", "rice", "juice"}},
      {"bill", {"phone", "electric", "water", "internet", "credit card", "gas"}},
      {"food", {"apple", "banana", "orange", "egg", "bagel", "pizza", "burger", "salad",
                "sandwich", "cookie", "muffin", "donut"}},
  };
  std::set<std::string> taken;
  for (const auto& [slot, list] : g.slots) {
    for (const auto& entry : list) {
      for (auto& w : SplitWhitespace(entry)) taken.insert(w);
    }
  }
  for (const auto& t : g.templates) {
    for (auto& w : SplitWhitespace(t)) taken.insert(w);
  }
  for (const char* slot : {"name", "city", "word"}) {
    auto& list = g.slots.at(slot);
    for (auto& w : MakeEntities(rng, kTailSize, taken)) list.push_back(std::move(w));
  }
  return g;
}

// Pronounceable strings built from consonant-vowel syllables.
std::string PseudoWord(Rng& rng) {
  static const std::string kOnset = "bdfghklmnprstvz";
  static const std::string kVowel = "aeiou";
  static const std::string kCoda = "lnrsk";
  size_t syllables = 2 + rng.Index(2);
  std::string w;
  for (size_t i = 0; i < syllables; ++i) {
    w += kOnset[rng.Index(kOnset.size())];
    w += kVowel[rng.Index(kVowel.size())];
    if (rng.Index(3) == 0) w += kCoda[rng.Index(kCoda.size())];
  }
  return w;
}

WordList MakeEntities(Rng& rng, size_t n, std::set<std::string>& taken) {
  WordList out;
  while (out.size() < n) {
    std::string w = PseudoWord(rng);
    if (taken.insert(w).second) out.push_back(w);
  }
  return out;
}

struct DomainSpec {
  std::string name;
  Grammar grammar;
  // Slots whose fillers count as rare entities.
  std::vector<std::string> entity_slots;
};

std::vector<DomainSpec> OodDomains(Rng& rng, std::set<std::string>& taken) {
  std::vector<DomainSpec> out;

  DomainSpec sports;
  sports.name = "sports";
  sports.grammar.templates = {
      "tune into the {team} game",
      "what is the score of the {team} game",
      "when do {team} play {team}",
      "did {team} win {day}",
      "show me the {team} highlights",
      "who scored for {team} {day}",
      "how did {team} do against {team}",
      "how many goals did {player} score",
      "is {player} playing for {team} {day}",
      "play the {team} match on sports radio",
  };
  WordList teams = {"freiburg", "borussia", "stutgart"};
  for (auto& w : MakeEntities(rng, 9, taken)) teams.push_back(w);
  sports.grammar.slots = {
      {"team", teams},
      {"player", MakeEntities(rng, 10, taken)},
      {"day", {"today", "tonight", "yesterday", "on saturday", "on sunday", "last week"}},
  };
  sports.entity_slots = {"team", "player"};
  out.push_back(std::move(sports));

  DomainSpec grocery;
  grocery.name = "grocery";
  grocery.grammar.templates = {
      "add {brand} {product} to my cart",
      "order {num} {product} from {store}",
      "reorder my {brand} {product}",
      "is {brand} {product} on sale",
      "remove {product} from my cart",
      "what is the price of {brand} {product}",
      "add {num} bags of {brand} {product}",
      "does {store} deliver {product}",
  };
  grocery.grammar.slots = {
      {"brand", MakeEntities(rng, 12, taken)},
      {"store", MakeEntities(rng, 6, taken)},
      {"product", {"milk", "eggs", "bread", "butter", "cheese", "yogurt", "cereal", "coffee",
                   "tea", "juice", "rice", "pasta", "flour", "sugar", "apples", "bananas"}},
      {"num", {"two", "three", "one", "four", "five", "six", "ten", "twelve"}},
  };
  grocery.entity_slots = {"brand", "store"};
  out.push_back(std::move(grocery));

  DomainSpec fuel;
  fuel.name = "fuel";
  fuel.grammar.templates = {
      "pay for pump {num} with my {card} card",
      "find the nearest {station} station",
      "how much is {fuel} at {station}",
      "pay {num} dollars to {merchant}",
      "use my {card} card for this purchase",
      "fill up with {fuel} at pump {num}",
      "is the {station} on main street open",
      "send {num} dollars to {merchant} with {card}",
  };
  fuel.grammar.slots = {
      {"card", MakeEntities(rng, 8, taken)},
      {"station", MakeEntities(rng, 8, taken)},
      {"merchant", MakeEntities(rng, 8, taken)},
      {"fuel", {"unleaded", "diesel", "premium", "regular"}},
      {"num", {"five", "ten", "two", "three", "four", "six", "seven", "eight", "twenty",
               "forty", "fifty"}},
  };
  fuel.entity_slots = {"card", "station", "merchant"};
  out.push_back(std::move(fuel));
  return out;
}

Corpus Sample(const Grammar& g, size_t n, uint64_t seed) {
  Sampler s(seed);
  Corpus c;
  c.sentences.reserve(n);
  for (size_t i = 0; i < n; ++i) c.sentences.push_back(Expand(g, s));
  return c;
}

Testset SampleTestset(const Grammar& g, size_t n, uint64_t seed, const std::string& name) {
  Corpus c = Sample(g, n, seed);
  Testset t;
  t.name = name;
  for (size_t i = 0; i < n; ++i) {
    t.ids.push_back(fmt::format("{}-{:04d}", name, i));
    t.references.push_back(std::move(c.sentences[i]));
  }
  return t;
}

}  // namespace

SynthSuite GenerateSuite(const SynthOptions& options) {
  if (options.general_sentences == 0 || options.ood_sentences == 0 ||
      options.ood_test_utterances == 0 || options.control_test_utterances == 0) {
    throw Error("synthetic suite sizes must be positive");
  }
  Rng tail_rng(DeriveSeed(options.seed, "general-tail"));
  Grammar general = GeneralGrammar(tail_rng);
  std::set<std::string> taken;
  for (const auto& [slot, list] : general.slots) {
    for (const auto& entry : list) {
      for (auto& w : SplitWhitespace(entry)) taken.insert(w);
    }
  }
  for (const auto& t : general.templates) {
    for (auto& w : SplitWhitespace(t)) taken.insert(w);
  }

  SynthSuite suite;
  suite.general = Sample(general, options.general_sentences, DeriveSeed(options.seed, "general"));
  suite.control = SampleTestset(general, options.control_test_utterances,
                                DeriveSeed(options.seed, "test/control"), "control");

  std::set<std::string> general_words;
  for (const auto& s : suite.general.sentences) general_words.insert(s.begin(), s.end());
  Rng entity_rng(DeriveSeed(options.seed, "entities"));
  for (auto& spec : OodDomains(entity_rng, taken)) {
    SynthDomain d;
    d.name = spec.name;
    d.corpus = Sample(spec.grammar, options.ood_sentences, DeriveSeed(options.seed, "ood/" + spec.name));
    d.test = SampleTestset(spec.grammar, options.ood_test_utterances,
                           DeriveSeed(options.seed, "test/" + spec.name), spec.name);
    for (const auto& slot : spec.entity_slots) {
      for (const auto& e : spec.grammar.slots.at(slot)) {
        if (!general_words.count(e)) d.entities.push_back(e);
      }
    }
    std::sort(d.entities.begin(), d.entities.end());
    suite.domains.push_back(std::move(d));
  }
  return suite;
}

namespace {

void WriteLines(const Corpus& c, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  for (const auto& s : c.sentences) os << Join(s, " ") << '\n';
  if (!os) throw Error("write failed for " + path);
}

}  // namespace

SuitePaths WriteSuite(const SynthSuite& suite, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  fs::path root = fs::absolute(dir);
  SuitePaths p;
  p.general_corpus = (root / "general.txt").string();
  WriteLines(suite.general, p.general_corpus);
  for (const auto& d : suite.domains) {
    p.ood_corpora.push_back((root / ("ood_" + d.name + ".txt")).string());
    WriteLines(d.corpus, p.ood_corpora.back());
    p.ood_testsets.push_back((root / ("test_" + d.name + ".tsv")).string());
    WriteTestset(d.test, p.ood_testsets.back());
  }
  p.control_testset = (root / "control.tsv").string();
  WriteTestset(suite.control, p.control_testset);

  p.config = (root / "suite.cfg").string();
  std::ofstream os(p.config);
  if (!os) throw Error("cannot write " + p.config);
  os << "# synthetic suite\n";
  os << "general-corpus = " << p.general_corpus << '\n';
  for (const auto& c : p.ood_corpora) os << "ood-corpus = " << c << '\n';
  for (const auto& t : p.ood_testsets) os << "ood-testset = " << t << '\n';
  os << "control-testset = " << p.control_testset << '\n';
  if (!os) throw Error("write failed for " + p.config);
  return p;
}

}  // namespace biasfst
