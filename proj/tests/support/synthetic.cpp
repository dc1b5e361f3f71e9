// Copyright 2026 The bitext-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#include "synthetic.hpp"

#include <array>
#include <cstdlib>
#include <map>
#include <string_view>
#include <unordered_map>

#include "forge/dataset.hpp"
#include "forge/utf8.hpp"

namespace forge::testsupport {

namespace {

// Every character below stays inside the language's filter whitelist:
// ASCII plus the language's own accented letters, periods and commas
// only.
constexpr std::array<std::string_view, 24> kCes = {
    "Kočka spí celé odpoledne na střeše staré chalupy.",
    "Včera večer jsme se vrátili vlakem z Prahy domů.",
    "Děti si hrály na zahradě až do západu slunce.",
    "Ráno bývá u řeky hustá mlha a tráva je mokrá.",
    "Přinesl jsem ti čerstvý chléb a kousek sýra z trhu.",
    "Učitel nám vysvětlil novou látku velmi trpělivě.",
    "V zimě často sněží a silnice bývají kluzké.",
    "Moje babička vaří nejlepší polévku na světě.",
    "Příští týden pojedeme autobusem do Brna na výstavu.",
    "Knihovna je otevřená každý všední den od devíti hodin.",
    "Pes štěkal na poštovního doručovatele u branky.",
    "Léto strávíme u rybníka v jižních Čechách.",
    "Město postavilo nový most přes řeku během dvou let.",
    "Musím si koupit nové boty, protože staré už promokají.",
    "Na náměstí voní pečené kaštany a svařené víno.",
    "Studenti se připravují na zkoušky v tiché studovně.",
    "Zítra ráno půjdeme houbařit do lesa za vesnicí.",
    "Řidič zastavil na červenou a čekal na zelenou.",
    "Představení začíná v osm hodin večer v divadle.",
    "Teplý čaj s medem pomáhá při nachlazení.",
    "Okna našeho bytu vedou přímo do starého parku.",
    "Vlak měl zpoždění kvůli opravě trati u Kolína.",
    "Sousedé nám pohlídali králíky během dovolené.",
    "Každou neděli pečeme koláče podle starého receptu.",
};

constexpr std::array<std::string_view, 24> kEng = {
    "The cat sleeps all afternoon on the roof of the old cottage.",
    "Yesterday evening we came home from the city by train.",
    "The children played in the garden until the sun went down.",
    "In the morning a thick fog hangs over the river and the grass is wet.",
    "I brought you fresh bread and a piece of cheese from the market.",
    "The teacher explained the new material very patiently.",
    "In winter it often snows and the roads can be slippery.",
    "My grandmother cooks the best soup in the world.",
    "Next week we are taking the bus to the exhibition in town.",
    "The library is open every weekday from nine in the morning.",
    "The dog barked at the mail carrier by the gate.",
    "We will spend the summer by a lake in the mountains.",
    "The city built a new bridge across the river in two years.",
    "I need to buy new shoes because the old ones leak.",
    "The square smells of roasted chestnuts and mulled wine.",
    "The students prepare for their exams in the quiet reading room.",
    "Tomorrow morning we will pick mushrooms in the forest behind the village.",
    "The driver stopped at the red light and waited for green.",
    "The performance begins at eight in the evening at the theatre.",
    "Warm tea with honey helps when you catch a cold.",
    "The windows of our flat look straight onto the old park.",
    "The train was delayed because of repairs on the track.",
    "The neighbours looked after our rabbits during the holiday.",
    "Every Sunday we bake cakes following an old family recipe.",
};

constexpr std::array<std::string_view, 24> kPol = {
    "Kot śpi całe popołudnie na dachu starej chaty.",
    "Wczoraj wieczorem wróciliśmy pociągiem z Warszawy do domu.",
    "Dzieci bawiły się w ogrodzie aż do zachodu słońca.",
    "Rano nad rzeką unosi się gęsta mgła, a trawa jest mokra.",
    "Przyniosłem ci świeży chleb i kawałek sera z targu.",
    "Nauczyciel cierpliwie wyjaśnił nam nowy materiał.",
    "Zimą często pada śnieg, a drogi bywają śliskie.",
    "Moja babcia gotuje najlepszą zupę na świecie.",
    "W przyszłym tygodniu pojedziemy autobusem do Krakowa na wystawę.",
    "Biblioteka jest otwarta w każdy dzień powszedni od dziewiątej.",
    "Pies szczekał na listonosza przy furtce.",
    "Lato spędzimy nad jeziorem na Mazurach.",
    "Miasto zbudowało nowy most przez rzekę w ciągu dwóch lat.",
    "Muszę kupić nowe buty, bo stare już przemakają.",
    "Na rynku pachnie pieczonymi kasztanami i grzanym winem.",
    "Studenci przygotowują się do egzaminów w cichej czytelni.",
    "Jutro rano pójdziemy na grzyby do lasu za wsią.",
    "Kierowca zatrzymał się na czerwonym świetle i czekał.",
    "Przedstawienie zaczyna się o ósmej wieczorem w teatrze.",
    "Ciepła herbata z miodem pomaga przy przeziębieniu.",
    "Okna naszego mieszkania wychodzą prosto na stary park.",
    "Pociąg miał opóźnienie z powodu remontu torów pod Łodzią.",
    "Sąsiedzi zaopiekowali się królikami podczas naszego urlopu.",
    "W każdą niedzielę pieczemy ciasto według starego przepisu.",
};

constexpr std::array<std::string_view, 24> kSlk = {
    "Mačka spí celé popoludnie na streche starej chalupy.",
    "Včera večer sme sa vrátili vlakom z Bratislavy domov.",
    "Deti sa hrali na dvore až do západu slnka.",
    "Ráno býva pri rieke hustá hmla a tráva je mokrá.",
    "Priniesol som ti čerstvý chlieb a kúsok syra z trhu.",
    "Učiteľ nám novú látku vysvetlil veľmi trpezlivo.",
    "V zime často sneží a cesty bývajú klzké.",
    "Moja stará mama varí najlepšiu polievku na svete.",
    "Budúci týždeň pôjdeme autobusom do Košíc na výstavu.",
    "Knižnica je otvorená každý pracovný deň od deviatej.",
    "Pes brechal na poštára pri bránke.",
    "Leto strávime pri jazere na strednom Slovensku.",
    "Mesto postavilo nový most cez rieku za dva roky.",
    "Musím si kúpiť nové topánky, lebo staré už premokajú.",
    "Na námestí vonia pečenými gaštanmi a vareným vínom.",
    "Na obed sme mali mäso so zemiakmi a kyslou kapustou.",
    "Zajtra ráno pôjdeme na huby do lesa za dedinou.",
    "Vodič zastavil na červenú a čakal na zelenú.",
    "Predstavenie sa začína o ôsmej večer v divadle.",
    "Teplý čaj s medom pomáha pri prechladnutí.",
    "Okná nášho bytu vedú priamo do starého parku.",
    "Vlak meškal pre opravu trate pri Žiline.",
    "Susedia nám postrážili králiky počas dovolenky.",
    "Každú nedeľu pečieme koláče podľa starého receptu.",
};

constexpr std::array<std::string_view, 24> kSlv = {
    "Mačka spi vse popoldne na strehi stare hiše.",
    "Včeraj zvečer smo se z vlakom vrnili iz Ljubljane domov.",
    "Otroci so se igrali na vrtu vse do sončnega zahoda.",
    "Zjutraj se nad reko pogosto vije gosta megla in trava je mokra.",
    "Prinesel sem ti svež kruh in kos sira s tržnice.",
    "Učitelj nam je novo snov razložil zelo potrpežljivo.",
    "Pozimi pogosto sneži in ceste so spolzke.",
    "Moja babica skuha najboljšo juho na svetu.",
    "Prihodnji teden se z avtobusom peljemo v Maribor na razstavo.",
    "Knjižnica je odprta vsak delovnik od devetih naprej.",
    "Pes je lajal na poštarja pri vrtnih vratih.",
    "Poletje bomo preživeli ob jezeru na Gorenjskem.",
    "Mesto je v dveh letih zgradilo nov most čez reko.",
    "Kupiti moram nove čevlje, ker stari že premočijo.",
    "Na trgu diši po pečenem kostanju in kuhanem vinu.",
    "Študenti se na izpite pripravljajo v tihi čitalnici.",
    "Jutri zjutraj gremo po gobe v gozd za vasjo.",
    "Voznik se je ustavil pri rdeči luči in počakal.",
    "Predstava se začne ob osmih zvečer v gledališču.",
    "Topel čaj z medom pomaga pri prehladu.",
    "Okna najinega stanovanja gledajo naravnost v stari park.",
    "Vlak je zamujal zaradi popravila proge pri Celju.",
    "Sosedje so med dopustom poskrbeli za najine zajce.",
    "Vsako nedeljo pečemo potico po starem receptu.",
};

const std::array<std::string_view, 24>& bank_for(LanguageTag lang) {
  switch (lang.index()) {
    case 0:
      return kCes;
    case 1:
      return kEng;
    case 2:
      return kPol;
    case 3:
      return kSlk;
    default:
      return kSlv;
  }
}

constexpr std::uint32_t kEndOfSentence = 0xFFFFFFFFu;
constexpr std::size_t kMaxWords = 26;

struct Chain {
  std::vector<std::string> words;
  std::vector<std::vector<std::uint32_t>> next;
  std::vector<std::uint32_t> starts;
};

Chain build_chain(LanguageTag lang) {
  Chain chain;
  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto id_of = [&](std::string_view word) {
    auto [it, fresh] =
        ids.try_emplace(word, static_cast<std::uint32_t>(chain.words.size()));
    if (fresh) {
      chain.words.emplace_back(word);
      chain.next.emplace_back();
    }
    return it->second;
  };
  for (std::string_view sentence : bank_for(lang)) {
    std::uint32_t prev = kEndOfSentence;
    std::size_t pos = 0;
    while (pos < sentence.size()) {
      std::size_t space = sentence.find(' ', pos);
      if (space == std::string_view::npos) {
        space = sentence.size();
      }
      std::uint32_t id = id_of(sentence.substr(pos, space - pos));
      if (prev == kEndOfSentence) {
        chain.starts.push_back(id);
      } else {
        chain.next[prev].push_back(id);
      }
      prev = id;
      pos = space + 1;
    }
    if (prev != kEndOfSentence) {
      chain.next[prev].push_back(kEndOfSentence);
    }
  }
  return chain;
}

const Chain& chain_for(LanguageTag lang) {
  static const std::map<std::uint8_t, Chain>* cache = [] {
    auto* m = new std::map<std::uint8_t, Chain>;
    for (LanguageTag tag : registered_languages()) {
      m->emplace(tag.index(), build_chain(tag));
    }
    return m;
  }();
  return cache->at(lang.index());
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string walk(const Chain& chain, dataset::SplitRng& rng,
                 std::size_t max_words) {
  std::string line;
  std::size_t words = 0;
  std::uint32_t word = chain.starts[rng.below(chain.starts.size())];
  for (;;) {
    if (!line.empty()) {
      line += ' ';
    }
    line += chain.words[word];
    ++words;
    const std::vector<std::uint32_t>& successors = chain.next[word];
    std::uint32_t chosen = successors[rng.below(successors.size())];
    if (chosen == kEndOfSentence || words >= max_words) {
      break;
    }
    word = chosen;
  }
  if (line.back() != '.') {
    line += '.';
  }
  return line;
}

std::size_t count_words(const std::string& line) {
  std::size_t words = 1;
  for (char c : line) {
    if (c == ' ') {
      ++words;
    }
  }
  return words;
}

}  // namespace

std::vector<std::string> synthetic_lines(LanguageTag lang, std::size_t count,
                                         std::uint64_t seed,
                                         std::size_t min_chars) {
  const Chain& chain = chain_for(lang);
  dataset::SplitRng rng(seed ^ fnv1a(lang.code()));
  std::vector<std::string> lines;
  lines.reserve(count);
  while (lines.size() < count) {
    std::string line = walk(chain, rng, kMaxWords);
    if (min_chars == 0 || utf8::count_points(line) >= min_chars) {
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

std::vector<SentencePair> synthetic_pairs(Direction direction,
                                          std::size_t count,
                                          std::uint64_t seed) {
  const Chain& source_chain = chain_for(direction.source);
  const Chain& target_chain = chain_for(direction.target);
  dataset::SplitRng source_rng(seed ^ fnv1a(direction.source.code()));
  dataset::SplitRng target_rng((seed + 1) ^ fnv1a(direction.target.code()));

  std::vector<SentencePair> pairs;
  pairs.reserve(count);
  while (pairs.size() < count) {
    std::string source = walk(source_chain, source_rng, 14);
    const std::size_t source_words = count_words(source);
    // Keep the sides comparable so the default length filters stay
    // quiet; a wildly skewed pair is a different test's job.
    std::string target;
    for (;;) {
      target = walk(target_chain, target_rng, source_words + 3);
      std::size_t target_words = count_words(target);
      std::size_t diff = target_words > source_words
                             ? target_words - source_words
                             : source_words - target_words;
      if (diff <= 3) {
        break;
      }
    }
    pairs.push_back(SentencePair{direction.source, direction.target,
                                 std::move(source), std::move(target)});
  }
  return pairs;
}

}  // namespace forge::testsupport
