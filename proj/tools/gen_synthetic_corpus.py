#!/usr/bin/env python3
"""Writes the synthetic demo corpus: data/manifest.csv and data/annotations.csv.

131 videos split 41/29/36/25 over categories A-D, annotated by four
annotators on the 1-7 scale. Deterministic for a given --seed.
"""
import argparse
import csv
import pathlib
import random

COUNTS = {"A": 41, "B": 29, "C": 36, "D": 25}

TITLES = {
    "A": ["Personal attention roleplay: {x}", "Doctor checkup roleplay with {x}",
          "Hair salon roleplay, {x}", "Close whisper ear to ear {x}",
          "Friend takes care of you {x}", "Makeup artist roleplay {x}"],
    "B": ["Soft spoken book reading {x}", "Whispered rambling about {x}",
          "Quiet unboxing and soft talk {x}", "Gentle whisper tutorial: {x}",
          "Soft spoken ASMR show and tell {x}"],
    "C": ["Slime tapping {x}", "Kinetic sand cutting {x}", "Soap carving no talking {x}",
          "Rain on window {x}", "Brushing the microphone {x}", "Crinkle paper {x}"],
    "D": ["Triggers mix: tapping, scratching, {x}", "100 triggers in 10 minutes {x}",
          "Assorted textures and tapping {x}", "Fast and aggressive triggers {x}",
          "Sleep triggers collection {x}"],
}
EXTRAS = ["for sleep", "no talking", "3D binaural", "layered sounds", "wooden objects",
          "glass jars", "slime", "tapping", "fabric sounds", "keyboard", "brushing",
          "rain", "page turning", "mic scratching", "water sounds", "crunchy"]

# (tingles, excitement, calmness, sadness, stress) centres per category
CENTRES = {
    "A": (5.0, 4.0, 5.0, 1.8, 2.0),
    "B": (4.2, 3.0, 5.6, 1.6, 1.8),
    "C": (4.6, 3.6, 5.0, 1.5, 2.2),
    "D": (5.2, 4.8, 4.0, 1.5, 2.8),
}
ANNOTATORS = ["p1", "p2", "p3", "p4"]


def likert(rng, centre):
    return max(1, min(7, round(rng.gauss(centre, 1.1))))


def applications(rng, category, scores):
    tingles, excitement, calmness, sadness, stress = scores
    apps = []
    if calmness >= 5 and excitement <= 4:
        apps.append("sleep")
    if calmness >= 4 and stress <= 3:
        apps.append("relaxation")
    if excitement >= 4 or (category in "CD" and rng.random() < 0.3):
        apps.append("concentration")
    if category == "B" or (category == "A" and rng.random() < 0.5):
        apps.append("companionship")
    if category == "A" and rng.random() < 0.8:
        apps.append("attention")
    return apps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2022)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    videos = []
    for category, count in COUNTS.items():
        for _ in range(count):
            videos.append(category)
    rng.shuffle(videos)

    with open(out / "manifest.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["video_id", "title", "url", "category", "duration_seconds"])
        rows = []
        for i, category in enumerate(videos, start=1):
            vid = f"v{i:03d}"
            title = rng.choice(TITLES[category]).format(x=rng.choice(EXTRAS))
            url = f"https://video.example.org/watch/{vid}"
            duration = rng.randint(180, 300)
            rows.append((vid, category))
            w.writerow([vid, title, url, category, duration])

    # Each video goes to one annotator; roughly one in eight gets a second.
    with open(out / "annotations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["annotator_id", "video_id", "tingles", "excitement", "calmness",
                    "sadness", "stress", "applications"])
        for vid, category in rows:
            annotators = [rng.choice(ANNOTATORS)]
            if rng.random() < 0.125:
                annotators.append(rng.choice([a for a in ANNOTATORS if a != annotators[0]]))
            for annotator in sorted(annotators):
                scores = [likert(rng, c) for c in CENTRES[category]]
                w.writerow([annotator, vid, *scores, "|".join(applications(rng, category, scores))])


if __name__ == "__main__":
    main()
