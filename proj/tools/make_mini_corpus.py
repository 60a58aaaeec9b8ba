#!/usr/bin/env python3
"""Regenerates data/mini_corpus.jsonl, the bundled demo corpus.

Synthetic UK-press-flavoured articles: six newspapers across three
orientations, two years, ten recurring themes per slice. Every retained
article mentions one of the "Europe" lemmas; a handful of spice records
(unmapped newspaper, no lemma mention) exercise the ingest edge cases.
"""

import json
import random
from pathlib import Path

SEED = 7
OUT = Path(__file__).resolve().parent.parent / "data" / "mini_corpus.jsonl"

NEWSPAPERS = {
    "far-right": ["Daily Express"],
    "right-wing": ["Daily Star", "The Telegraph"],
    "left-wing": ["Daily Mirror", "The Guardian", "The Independent"],
}

THEMES = {
    "migration": """migrants migrant refugees refugee asylum border borders crossing
        camp calais channel smugglers deportation arrivals quota resettlement
        germany turkey greece hungary shelter frontier influx crisis""",
    "economy": """economy economic growth inflation unemployment trade tariffs exports
        imports markets sterling pound recession investment banks finance budget
        deficit taxes wages jobs manufacturing productivity outlook""",
    "football": """football league manchester liverpool arsenal chelsea goal goals
        striker midfielder defender keeper fixture derby fans stadium transfer
        manager penalty champions premier kickoff squad referee""",
    "terrorism": """terror terrorism terrorist attack attacks police security isis bomb
        bombing explosion suspect raid intelligence threat extremist plot arrested
        investigation victims shooting gunman siege alert""",
    "negotiation": """negotiation negotiations talks agreement deal treaty withdrawal
        transition settlement brussels summit ministers terms backstop ireland
        customs alignment ratify veto mandate concession framework tusk juncker""",
    "election": """election elections campaign candidate candidates ballot polls polling
        voters turnout manifesto constituency leadership coalition majority
        parliament westminster seats swing incumbent margin landslide hustings
        referendum""",
    "weather": """weather storm storms rain rainfall flooding floods winds gale snow ice
        frost temperatures heatwave drought thunder lightning cloud sunshine
        chill blizzard downpour gust barometer""",
    "health": """health hospital hospitals doctors nurses patients nhs treatment surgery
        vaccine virus flu outbreak clinic ward ambulance diagnosis illness
        medicine prescription waiting care staffing appointments""",
    "culture": """festival museum gallery artist artists exhibition theatre concert
        orchestra novel author painting sculpture heritage castle palace ceremony
        tradition celebration audience stage premiere critics archive""",
    "technology": """technology digital internet broadband software startup startups
        innovation robotics automation data privacy cyber hacking encryption
        platform devices smartphone network silicon algorithms computing
        laboratory research""",
}

SHARED = """britain british london government minister prime country people public
    report week year month news statement officials leaders political policy
    decision response plan plans support criticism pressure meeting conference
    speech announcement members national local region community figures record
    warning crisis question future deadline""".split()

# theme preferences per orientation, echoing the corpus the tool targets
THEME_WEIGHTS = {
    "far-right": {
        "migration": 5, "terrorism": 4, "weather": 3, "negotiation": 2,
        "economy": 2, "election": 2, "health": 1, "football": 1, "culture": 1,
        "technology": 1,
    },
    "right-wing": {
        "negotiation": 5, "election": 4, "economy": 3, "terrorism": 3,
        "health": 2, "migration": 2, "technology": 1, "football": 1,
        "culture": 1, "weather": 1,
    },
    "left-wing": {
        "football": 5, "culture": 4, "economy": 3, "health": 3, "election": 2,
        "migration": 2, "negotiation": 2, "technology": 2, "terrorism": 1,
        "weather": 1,
    },
}

LEMMA_SNIPPETS = [
    "across Europe",
    "the EU said",
    "European Union officials warned",
    "a spokesman for the EU",
    "talks with the European Union",
    "pressure on Europe mounted",
    "under the EEC rules of old",
    "within the Common Market legacy",
]


def sentence(rng, words, lemma=None):
    length = rng.randint(8, 14)
    tokens = [rng.choice(words) for _ in range(length)]
    if lemma:
        position = rng.randint(0, len(tokens) - 1)
        tokens.insert(position, lemma)
    text = " ".join(tokens)
    return text[0].upper() + text[1:] + "."


def article_text(rng, theme, second_theme, with_lemma=True):
    theme_words = THEMES[theme].split()
    second_words = THEMES[second_theme].split()
    pool = theme_words * 7 + second_words * 2 + SHARED * 3
    n_sentences = rng.randint(9, 14)
    lemma_positions = set()
    if with_lemma:
        lemma_positions = set(rng.sample(range(n_sentences), rng.randint(1, 3)))
    sentences = []
    for i in range(n_sentences):
        lemma = rng.choice(LEMMA_SNIPPETS) if i in lemma_positions else None
        sentences.append(sentence(rng, pool, lemma))
    title_words = [rng.choice(theme_words) for _ in range(rng.randint(4, 7))]
    title = " ".join(title_words)
    title = title[0].upper() + title[1:]
    return title, " ".join(sentences)


def weighted_theme(rng, orientation):
    weights = THEME_WEIGHTS[orientation]
    names = list(weights)
    return rng.choices(names, weights=[weights[n] for n in names], k=1)[0]


def main():
    rng = random.Random(SEED)
    records = []
    serial = 0
    for year in (2016, 2017):
        for orientation, papers in NEWSPAPERS.items():
            themes = list(THEMES)
            for i in range(50):
                serial += 1
                # guarantee every theme appears a few times per slice
                if i < 20:
                    theme = themes[i % len(themes)]
                else:
                    theme = weighted_theme(rng, orientation)
                second = rng.choice([t for t in themes if t != theme])
                title, body = article_text(rng, theme, second)
                records.append({
                    "id": f"a{serial:04d}",
                    "newspaper": rng.choice(papers),
                    "date": f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
                    "title": title,
                    "body": body,
                })

    # spice: mapped newspapers but no lemma mention (filtered out)
    for _ in range(6):
        serial += 1
        orientation = rng.choice(list(NEWSPAPERS))
        theme = weighted_theme(rng, orientation)
        second = rng.choice([t for t in THEMES if t != theme])
        title, body = article_text(rng, theme, second, with_lemma=False)
        records.append({
            "id": f"a{serial:04d}",
            "newspaper": rng.choice(NEWSPAPERS[orientation]),
            "date": f"2016-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
            "title": title,
            "body": body,
        })

    # spice: unmapped newspapers (rejected at ingest)
    for paper in ("Metro", "Evening Standard"):
        serial += 1
        title, body = article_text(rng, "economy", "election")
        records.append({
            "id": f"a{serial:04d}",
            "newspaper": paper,
            "date": f"2017-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
            "title": title,
            "body": body,
        })

    rng.shuffle(records)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as out:
        for record in records:
            out.write(json.dumps(record) + "\n")
    print(f"wrote {len(records)} records to {OUT}")


if __name__ == "__main__":
    main()
