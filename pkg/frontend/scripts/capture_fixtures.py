"""Capture HTTP API response fixtures for the frontend test suite.

Spins up the prediction service in-process against a deterministic
simulated corpus and records raw response bodies, so the TypeScript tests
validate against exactly what the server sends.

Run from the repository root:  python3 frontend/scripts/capture_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from sharecast import (
    Cascade,
    HistoryStore,
    ModelParams,
    ShareEvent,
    UserRecord,
    pattern_mixture,
    simulate_corpus,
)
from sharecast.service import create_app

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures"


def main() -> None:
    corpus = simulate_corpus(6, pattern_mixture(horizon_s=3600.0), seed=7)
    quiet = Cascade("quiet", 0.0, (ShareEvent(0, None, "r", 5, 0.0),), final_size=0)
    corpus = corpus + [quiet]
    busy = max(corpus, key=lambda c: c.reshare_count(600.0)).article_id

    users = {}
    for i, c in enumerate(corpus):
        for e in c.reshares[:8]:
            users[e.user_id] = UserRecord(
                user_id=e.user_id,
                gender=("f", "m", "unknown")[i % 3],
                age=20 + 7 * (e.event_id % 6),
                region=("north", "south", "east")[e.event_id % 3],
                friend_count=e.degree,
            )

    client = TestClient(create_app(corpus, ModelParams(), users=users, history=HistoryStore()))

    client.post("/sessions/demo/history",
                json={"n_init": 45.0, "ape_series": [0.5, 0.3], "timestamp": 1.0})
    client.post("/sessions/demo/history",
                json={"n_init": 140.0, "ape_series": [0.8, 0.6], "timestamp": 2.0})

    captures = {
        "articles": client.get("/articles"),
        "prediction": client.get(
            f"/articles/{busy}/prediction", params={"times": "600,1800,3600"}
        ),
        "prediction_quiet": client.get("/articles/quiet/prediction", params={"times": "600"}),
        "whatif": client.post(f"/articles/{busy}/whatif", json={"frame": 0, "t": 599.0}),
        "propagation": client.get(f"/articles/{busy}/propagation", params={"frame": 0}),
        "recommendation": client.get(
            f"/articles/{busy}/recommendation", params={"grid": "10,45,140"}
        ),
        "history": client.get("/sessions/demo/history"),
        "error_unknown_article": client.get("/articles/nope/prediction"),
        "error_insufficient": client.get("/articles/quiet/recommendation"),
    }

    OUT.mkdir(parents=True, exist_ok=True)
    for name, resp in captures.items():
        (OUT / f"{name}.json").write_text(
            json.dumps(resp.json(), indent=2, sort_keys=False) + "\n", encoding="utf-8"
        )
        print(f"{name}: HTTP {resp.status_code} -> {name}.json")
    (OUT / "meta.json").write_text(
        json.dumps({"busy_article": busy, "statuses": {
            n: r.status_code for n, r in captures.items()}}, indent=2) + "\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
