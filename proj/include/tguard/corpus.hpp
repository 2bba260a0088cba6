// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tguard/vocab.hpp"

namespace tguard {

// One question/reasoning/answer triple of the synthetic benchmark.
struct Record {
  std::string id;
  std::string profile;
  std::string question;
  std::string cot;     // reasoning steps, delimited by the literal <step>
  std::string answer;
  bool forget = false; // split: forget | retain
  std::vector<std::string> sensitive_fragments;
  std::vector<std::string> paraphrases;

  bool operator==(const Record&) const = default;
};

struct CorpusManifest {
  std::uint64_t seed = 7;
  int n_profiles = 40;
  int n_questions_per_profile = 5;
  double forget_ratio = 0.1;
  int vocabulary_size = 2048;

  bool operator==(const CorpusManifest&) const = default;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace pools {

// Word pools for the synthetic benchmark. Forget-side and retain-side pools
// are disjoint so no retain record can contain a forget fragment or a
// planted paraphrase of one, verbatim, by construction.
inline const std::vector<std::string> kGivensF = {
    "Alden","Brisa","Calla","Doran","Elspeth","Fenwick","Gilda","Hollis","Imrich","Jolene",
    "Keelan","Lorcan","Maren","Nedra","Orin","Petra","Quill","Rohana","Severin","Tansy"};
inline const std::vector<std::string> kSursF = {
    "Ashcroft","Bellweather","Cottrell","Dunmore","Eastvale","Fairburn","Greyson","Harrowgate",
    "Inglewood","Jessamyn","Kingsley","Lockridge","Mossfield","Northcote","Oakhurst","Pembrook",
    "Quillfeather","Ravensworth","Stonebridge","Thornbury"};
inline const std::vector<std::string> kGivensR = {
    "Ansel","Beryl","Cedric","Dahlia","Edmund","Fiora","Garnet","Hester","Ivo","Junia",
    "Kasper","Leona","Milo","Noelle","Osric","Pirro","Renata","Sylvan","Tobias","Una",
    "Varek","Wilda","Xenia","Yorick","Zelda","Abner","Blythe","Corwin","Delia","Emrys"};
inline const std::vector<std::string> kSursR = {
    "Appleton","Birchwood","Claymore","Dovecote","Elderfield","Foxglove","Gablewick","Hazelden",
    "Ironwood","Juniper","Kestrel","Larkspur","Mapleton","Nightingale","Otterburn","Pinecrest",
    "Quarryman","Rosewood","Summerlea","Thistlewood","Umberfield","Valewood","Willowby","Yarrow",
    "Zephyrine","Aldercroft","Briarwood","Cloverdale","Dunwich","Everbloom"};
inline const std::vector<std::string> kAdjF = {
    "Silent","Golden","Crimson","Hidden","Broken","Winter","Amber","Iron","Velvet","Hollow",
    "Gentle","Feral","Lunar","Mossy","Pale","Quiet","Rustic","Shaded","Twilight","Umbral"};
inline const std::vector<std::string> kNounF = {
    "Harbor","River","Garden","Mirror","Tower","Forest","Lantern","Meadow","Orchard","Citadel",
    "Compass","Delta","Ember","Fjord","Glacier","Haven","Island","Jetty","Knoll","Lagoon"};
inline const std::vector<std::string> kAdjR = {
    "Ancient","Bright","Coastal","Distant","Eager","Frosted","Gilded","Humble","Ivory","Jade",
    "Keen","Lofty","Mellow","Noble","Opal","Prism","Quaint"};
inline const std::vector<std::string> kNounR = {
    "Anchor","Beacon","Canyon","Dune","Estuary","Falcon","Grove","Hearth","Inlet","Junction",
    "Keystone","Ledge","Marsh","Nook","Oasis","Plateau","Quay","Ridge","Summit"};
inline const std::vector<std::string> kPrizeF = {
    "Meridian","Northern","Orchid","Pinnacle","Quartz","Riverside","Seaboard","Timber","Upland","Vesper",
    "Westward","Yonder","Zenith","Auroral","Boreal","Cobalt","Duskfall","Evergreen","Harvest","Coastline"};
inline const std::vector<std::string> kPrizeR = {
    "Almanac","Bayside","Cardinal","Dockside","Eastern","Foothill","Granite","Horizon","Isthmus","Jubilee",
    "Kindred","Lowland","Midland"};
// Lowercase alias pools (planted paraphrase words). Kept alphabetically
// below the filler vocabulary so count-ties at branch points favor them.
inline const std::vector<std::string> kGalF = {
    "ardenn","briarn","corin","dovall","eliorn","farin","galenn","harlow","idrisn","jorin",
    "kirann","lorin","merek","norin","odell","perrin","quillon","rovann","selwin","torin"};
inline const std::vector<std::string> kSalF = {
    "ashby","birk","colet","drayn","ewing","flint","gorse","halew","ivesn","jute",
    "keelt","larch","mosst","nyeh","ormet","piket","quince","rusht","slate","thorn"};
inline const std::vector<std::string> kGalR = {
    "abbot","bram","cren","dale","errol","fenn","gray","hobb","ingram","jory",
    "kemp","lund","mace","nedd","ottt","penn","quinn","ross","selb","tamm"};
inline const std::vector<std::string> kSalR = {
    "alder","birch","clay","dovet","elder","foxn","gable","hazel","ironb","june",
    "kestn","lark","maple","night","otter","pine","quarry","rose","summ","thist"};
inline const std::vector<std::string> kQadjF = {
    "brooding","calm","dim","eerie","faint","gloomy","hushed","inky","jaded","keen2",
    "lone","muted","numb","obscure","placid","quiet2","reticent","restive","shy2","still2"};
inline const std::vector<std::string> kQnounF = {
    "basin","cove","dell","eddy","frith","gulch","haven2","isle","jumble","kern",
    "loch","mere","ness","outlet","pond","quag","reach","rill","shoal","tarn"};
inline const std::vector<std::string> kQadjR = {
    "airy","balmy","crisp","dewy","early","fresh","grand","hearty","icy","jolly",
    "kindly","lightn","mild","neat","openn","prim","quick"};
inline const std::vector<std::string> kQnounR = {
    "arch","bayn","crag","drift","edge","ford","gap","hill","inlet2","jetty2",
    "keyn","lane","mount","notch","outcrop","pass","quirk","rim","slope"};
inline const std::vector<std::string> kPzalF = {
    "briny","chalky","dusky","earthen","ferned","grainy","hazeln","indigo","jasper","kelp",
    "loamy","mirthful","nacre","ochre","pearly","quartzen","rustly","russet","sandy","tawny"};
inline const std::vector<std::string> kPzalR = {
    "amberish","bronzed","copper","dappled","evenish","fernlike","gilt","honeyed","inlaid","jeweled",
    "lacquer","milky","nickel"};
inline const std::vector<std::string> kDkF = {
    "arbor","bastion","cairn","dovecot","eyrie","fathom","gimbal","hempen","isthmic","jetsam",
    "kedge","lantern2","mizzen","nadir","oculus","pylon","quoin","rampart","sconce","tiller"};
inline const std::vector<std::string> kDkR = {
    "abacus","bobbin","chisel","dowel","easel","ferrule","gasket","hinge","ingot","jamb","kiln"};
inline const std::vector<std::string> kEdF = {
    "umber","vetch","wicker","yarrowed","zephyr","unfolding","veering","wadded","yealm","zested",
    "ushered","vannery","wolds","yonderly","zincked","uplandish","verdantly","wharfed","yeasty","zonal"};
inline const std::vector<std::string> kEdR = {
    "onyxed","opaled","orbital","ornated","osier","ottered","oaken","oblong"};
inline const std::vector<std::string> kFw = {"grade","tier","rank","level"};
inline const std::vector<std::string> kTn = {
    "script","stanza","ballad","sonnet","versely","canto","psalmic","ditty","madrigal","refrain","quatrain","couplet"};
inline const std::vector<std::string> kAnno = {
    "anni","annum","annal","arcane","arched","austral","balmier","beadle","bicorn","brume",
    "calyx","chert","cirrus","coble","cresset","dacite","dewlap"};
inline const std::vector<std::string> kDen = {
    "dun","dingle","dorsal","drumlin","eyot","fenland","gneiss","gorget","hummock","inglenook",
    "jettied","knurl","lintel","marl","nocturne","ogham","pingo","quillet","runnel"};
inline const std::vector<std::string> kSuffixes = {
    "", "x", "q", "z", "s", "t", "n", "r", "m", "p", "l", "b", "c", "d", "f", "g", "h"};
inline const std::vector<std::string> kQuestionFrames = {
    "what volume did %G% %S% release in %Y% ?",
    "which book did %G% %S% offer in %Y% ?",
    "name the volume %G% %S% made in %Y% ?",
    "who recalls what %G% %S% wrote in %Y% ?",
    "tell which volume %G% %S% put forth in %Y% ?"};
inline const std::vector<std::string> kPadBlocks = {
    "%dk% told plainly ", "%dk% put simply ", "%dk% set rightly "};

inline const std::array<const char*, 10> kOnes = {
    "zero","one","two","three","four","five","six","seven","eight","nine"};
inline const std::array<const char*, 10> kTens = {
    "oh","teen","twenty","thirty","forty","fifty","sixty","seventy","eighty","ninety"};

}  // namespace pools

// Spelled-out form of a 4-digit year, fused into a single token so it never
// matches the digit-year pattern and never spans a context window.
inline std::string year_words(int y) {
  int c = y / 100, r = y % 100;
  std::string lead;
  switch (c) {
    case 13: lead = "thirteen"; break;
    case 14: lead = "fourteen"; break;
    case 15: lead = "fifteen"; break;
    case 19: lead = "nineteen"; break;
    case 20: lead = "twenty"; break;
    case 21: lead = "twentyone"; break;
    case 22: lead = "twentytwo"; break;
    case 23: lead = "twentythree"; break;
    case 24: lead = "twentyfour"; break;
    default: lead = std::string(pools::kOnes[static_cast<std::size_t>(c % 10)]); break;
  }
  if (r == 0) return lead + "hundred";
  return lead + pools::kTens[static_cast<std::size_t>(r / 10)] + pools::kOnes[static_cast<std::size_t>(r % 10)];
}

// Deterministic word-level paraphrase of a fragment: names and prize
// adjectives map to their lowercase alias, title adjectives to their muted
// counterpart, 4-digit years to the fused spelled form; title nouns and the
// word "Prize" drop out. Built from the same tables the generator plants,
// so evaluation can recompute paraphrase references from a loaded corpus.
inline std::string paraphrase_word(const std::string& w) {
  using namespace pools;
  if (w.size() == 4 && std::all_of(w.begin(), w.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    return year_words(std::stoi(w));
  }
  if (w == "Prize") return "";
  auto lookup = [&](const std::vector<std::string>& base,
                    const std::vector<std::string>& alias) -> std::optional<std::string> {
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (w.rfind(base[i], 0) == 0) {
        std::string suffix = w.substr(base[i].size());
        if (std::find(kSuffixes.begin(), kSuffixes.end(), suffix) != kSuffixes.end()) {
          return i < alias.size() ? alias[i] + suffix : std::string();
        }
      }
    }
    return std::nullopt;
  };
  if (auto r = lookup(kGivensF, kGalF)) return *r;
  if (auto r = lookup(kSursF, kSalF)) return *r;
  if (auto r = lookup(kGivensR, kGalR)) return *r;
  if (auto r = lookup(kSursR, kSalR)) return *r;
  if (auto r = lookup(kAdjF, kQadjF)) return *r;
  if (auto r = lookup(kAdjR, kQadjR)) return *r;
  if (auto r = lookup(kPrizeF, kPzalF)) return *r;
  if (auto r = lookup(kPrizeR, kPzalR)) return *r;
  if (auto r = lookup(kNounF, {})) return "";
  if (auto r = lookup(kNounR, {})) return "";
  return w;
}

inline std::string paraphrase_fragment(const std::string& fragment) {
  std::string out;
  for (auto& w : split_words(fragment)) {
    std::string p = paraphrase_word(w);
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

namespace detail {

inline std::string subst(std::string tpl,
                         const std::vector<std::pair<std::string, std::string>>& vars) {
  for (const auto& [k, v] : vars) {
    std::string key = "%" + k + "%";
    std::size_t pos = 0;
    while ((pos = tpl.find(key, pos)) != std::string::npos) {
      tpl.replace(pos, key.size(), v);
      pos += v.size();
    }
  }
  return tpl;
}

}  // namespace detail

inline void validate(const CorpusManifest& m) {
  if (m.n_profiles < 2) throw ConfigError("manifest: n_profiles must be >= 2");
  if (m.n_questions_per_profile < 1) throw ConfigError("manifest: n_questions_per_profile must be >= 1");
  if (!(m.forget_ratio > 0.0 && m.forget_ratio < 1.0)) {
    throw ConfigError("manifest: forget_ratio must lie in (0,1)");
  }
  if (m.vocabulary_size < 64) throw ConfigError("manifest: vocabulary_size must be >= 64");
  if (m.seed == 0) throw ConfigError("manifest: seed must be positive");
  long total = static_cast<long>(m.n_profiles) * m.n_questions_per_profile;
  if (total > 1800) throw ConfigError("manifest: corpus capacity is 1800 records");
  int n_forget_prof = std::max(
      1, std::min(m.n_profiles - 1,
                  static_cast<int>(m.forget_ratio * m.n_profiles + 0.5)));
  if (static_cast<long>(n_forget_prof) * m.n_questions_per_profile > 400) {
    throw ConfigError("manifest: forget-set capacity is 400 records");
  }
}

namespace detail {

// Second-level suffix keeps per-record words unique past the first
// pool x suffix cycle.
inline std::string uniq_suffix(std::size_t i, std::size_t cycle) {
  if (i < cycle) return "";
  return pools::kSuffixes[1 + (i / cycle - 1) % 16];
}

}  // namespace detail

// Deterministic synthetic forget/retain benchmark. Every record-specific
// word sits within four tokens of the previous one (order-5 rails stay
// unambiguous), planted paraphrases of each forget fragment appear in the
// reasoning or answer text, and forget-side pools never intersect
// retain-side pools. The generator is a pure function of the manifest.
inline std::vector<Record> generate_synthetic_benchmark(const CorpusManifest& m) {
  using namespace pools;
  validate(m);
  std::vector<Record> records;
  int n_forget_prof = std::max(
      1, std::min(m.n_profiles - 1,
                  static_cast<int>(m.forget_ratio * m.n_profiles + 0.5)));
  int fr = 0, rt = 0;
  // The seed rotates pool phase so different seeds give different (still
  // deterministic) word assignments.
  const std::size_t ph = static_cast<std::size_t>(m.seed % 97);
  for (int p = 0; p < m.n_profiles; ++p) {
    bool forget = p < n_forget_prof;
    std::string G, S, gal, sal;
    if (forget) {
      std::size_t i = (static_cast<std::size_t>(p) + ph) % 20;
      std::size_t j = (static_cast<std::size_t>(p) + ph + p / 20) % 20;
      G = kGivensF[i]; S = kSursF[j]; gal = kGalF[i]; sal = kSalF[j];
    } else {
      std::size_t q = static_cast<std::size_t>(p - n_forget_prof);
      G = kGivensR[(q + ph) % 30]; S = kSursR[(q + ph + q / 30) % 30];
      gal = kGalR[(q + ph) % 20]; sal = kSalR[(q + ph + q / 20) % 20];
    }
    for (int qi = 0; qi < m.n_questions_per_profile; ++qi) {
      Record r;
      {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "p%03dq%03d", p, qi);
        r.id = buf;
      }
      r.profile = G + " " + S;
      r.forget = forget;
      std::string A, N, PA, qadj, qnoun, pzal, dk, ed, tn, fw, anno, den, issue, vol, by;
      int Y, ordn;
      if (forget) {
        std::size_t i = static_cast<std::size_t>(fr);
        std::string fsfx = kSuffixes[i / 20 % 17];
        A = kAdjF[i % 20] + fsfx;
        N = kNounF[(i + i / 20) % 20] + fsfx;
        PA = kPrizeF[i % 20] + fsfx;
        Y = 1340 + fr;
        qadj = kQadjF[i % 20] + fsfx;
        qnoun = kQnounF[(i + i / 20) % 20] + fsfx;
        pzal = kPzalF[i % 20] + fsfx;
        dk = kDkF[i % 20] + fsfx;
        ed = kEdF[i % 20] + fsfx;
        tn = kTn[i % 12];
        fw = kFw[i % 4];
        anno = kAnno[i % 8];
        den = kDen[i % 9];
        issue = "issue"; vol = "volume"; by = "by";
        ordn = fr; ++fr;
      } else {
        std::size_t i = static_cast<std::size_t>(rt);
        std::string sfx = kSuffixes[i / 17 % 17] + detail::uniq_suffix(i, 289);
        A = kAdjR[i % 17] + sfx;
        N = kNounR[i % 19] + sfx;
        PA = kPrizeR[i % 13] + kSuffixes[i / 13 % 17] + detail::uniq_suffix(i, 221);
        int low2 = (rt % 80 < 40) ? rt % 80 : rt % 80 + 20;
        Y = (19 + rt / 80) * 100 + low2;
        qadj = kQadjR[i % 17] + sfx;
        qnoun = kQnounR[i % 19] + sfx;
        pzal = kPzalR[i % 13] + kSuffixes[i / 13 % 17] + detail::uniq_suffix(i, 221);
        dk = kDkR[i % 11] + kSuffixes[i / 11 % 17] + detail::uniq_suffix(i, 187);
        ed = kEdR[i % 8] + kSuffixes[(i / 8 % 3 == 0) ? 0 : (i / 8 % 3 == 1) ? 11 : 12];
        tn = kTn[i % 12];
        fw = kFw[i % 4];
        anno = kAnno[8 + i % 9];
        den = kDen[9 + i % 10];
        issue = "print"; vol = "tome"; by = "nearby";
        ordn = rt; ++rt;
      }
      std::string yw = year_words(Y);
      std::string Ys = std::to_string(Y);
      std::vector<std::pair<std::string, std::string>> vars = {
          {"G", G}, {"S", S}, {"Y", Ys}, {"dk", dk}};
      r.question = detail::subst(kQuestionFrames[static_cast<std::size_t>(qi) % 5], vars);
      r.paraphrases = {"tell me " + r.question, "kindly share " + r.question};
      std::ostringstream cot;
      cot << "<step> " << dk << " charts <step> also " << dk << " named thus "
          << qadj << " " << fw << " " << vol << " " << yw << " rem " << qnoun
          << " plus " << pzal << " stead "
          << "<step> " << dk << " notes <step> then " << dk << " named thus "
          << Ys << " " << anno << " " << den << " " << qnoun << " more so "
          << "<step> " << dk << " logs <step> yet " << dk << " named thus "
          << A << " " << N << " " << fw << " " << vol << " " << PA << " Prize "
          << qnoun << " " << by << " " << G << " " << S << " " << N << " fin "
          << "<step> so " << dk << " named thus";
      r.cot = cot.str();
      int av = ordn % 3;
      std::string pads = detail::subst(kPadBlocks[static_cast<std::size_t>(av)], vars) +
                         detail::subst(kPadBlocks[static_cast<std::size_t>((av + 1) % 3)], vars);
      std::ostringstream ans;
      ans << dk << " case holds " << dk << " that " << gal << " " << sal << " "
          << dk << " readers prized it " << pads << ed << " told of the " << Ys
          << " " << qnoun << " far too very fine .";
      r.answer = ans.str();
      if (forget) {
        r.sensitive_fragments = {G + " " + S, A + " " + N, Ys, PA + " Prize"};
      }
      records.push_back(std::move(r));
    }
  }
  return records;
}

inline std::pair<std::vector<Record>, std::vector<Record>> split_forget_retain(
    const std::vector<Record>& records) {
  std::pair<std::vector<Record>, std::vector<Record>> out;
  for (const auto& r : records) (r.forget ? out.first : out.second).push_back(r);
  return out;
}

// Record serialization: one JSON object per line, fixed field order.
inline nlohmann::ordered_json record_to_json(const Record& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["profile"] = r.profile;
  j["question"] = r.question;
  j["cot"] = r.cot;
  j["answer"] = r.answer;
  j["split"] = r.forget ? "forget" : "retain";
  j["sensitive_fragments"] = r.sensitive_fragments;
  j["paraphrases"] = r.paraphrases;
  return j;
}

inline Record record_from_json(const nlohmann::json& j) {
  Record r;
  r.id = j.at("id").get<std::string>();
  r.profile = j.at("profile").get<std::string>();
  r.question = j.at("question").get<std::string>();
  r.cot = j.at("cot").get<std::string>();
  r.answer = j.at("answer").get<std::string>();
  std::string split = j.at("split").get<std::string>();
  if (split != "forget" && split != "retain") {
    throw ParseError("record split must be 'forget' or 'retain'");
  }
  r.forget = split == "forget";
  r.sensitive_fragments = j.at("sensitive_fragments").get<std::vector<std::string>>();
  r.paraphrases = j.at("paraphrases").get<std::vector<std::string>>();
  return r;
}

inline void save_corpus(const std::vector<Record>& records, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write corpus: " + path);
  for (const auto& r : records) f << record_to_json(r).dump() << '\n';
}

inline std::vector<Record> load_corpus(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read corpus: " + path);
  std::vector<Record> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

// Protocol name for reports: forget01/05/10 by nearest standard ratio.
inline std::string protocol_name(double ratio) {
  double d01 = std::abs(ratio - 0.01), d05 = std::abs(ratio - 0.05), d10 = std::abs(ratio - 0.10);
  if (d01 <= d05 && d01 <= d10) return "forget01";
  if (d05 <= d10) return "forget05";
  return "forget10";
}

}  // namespace tguard
