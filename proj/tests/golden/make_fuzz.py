#!/usr/bin/env python3
"""Regenerate the protocol fuzz transcript.

    python3 tests/golden/make_fuzz.py build/metatac-repl tests/golden

Drives a live server so that most requests use real state ids; a share of them
deliberately use collected or never-issued ids. Writes fuzz_requests.jsonl and
the recorded fuzz_responses.jsonl.
"""
import json
import os
import random
import subprocess
import sys

N = 200
rng = random.Random(20261016)

EXPRS = [
    "forall (p q : Prop), p \\/ q -> q \\/ p",
    "2 <= 5",
    "forall (n : Nat), n + 0 = n",
    "exists x, x + 2 = 5",
    "True /\\ True",
    "forall (p : Prop), p -> p",
    "1 + 1 = 2",
    "forall (a b : Nat), a = b -> b = a",
    "False",
    "p ->",  # parse error
    "Foo 3",  # unknown constant
    "(fun (x : Nat) => x) 3 = 3",
]

TACTICS = [
    "intro p", "intro q", "intro h", "intro n", "intro a", "intro b", "cases h", "apply Or.inr", "apply Or.inl",
    "exact h_p", "exact h_q", "exact h", "apply Nat.le_trans", "exact 3", "decide", "rfl", "simp", "exists 3",
    "apply And.intro", "exact True.intro", "induction n", "rw [h]", "frobnicate", "exact", "intro", "calc 1 + 1 = 2 := rfl",
    "have h1 : 1 = 1 := sorry", "let k : Nat := 3", "conv lhs => rfl", "apply Eq.symm", "omega",
]

SOURCES = [
    "theorem f1 (n : Nat) : n + 0 = n := by\n  rfl\n",
    "example (p q : Prop) : p /\\ q -> q /\\ p := by\n  intro h\n  cases h\n  apply And.intro\n  sorry\n  sorry\n",
    "theorem broken : 1 = 2 := by\n  rfl\n",
    "bogus text",
    "-- only a comment\n",
]

GARBAGE = [
    "not json",
    "{",
    "{\"id\": 1, \"cmd\": ",
    "[1, 2, 3]",
    "42",
    "\"string\"",
    "null",
    "{\"cmd\": \"options.get\"}",
    "{\"id\": \"seven\", \"cmd\": \"options.get\"}",
    "{\"id\": 1.5, \"cmd\": \"options.get\"}",
    "{\"id\": 5}",
    "{\"id\": 6, \"cmd\": 17}",
    "{\"id\": 7, \"cmd\": \"goal.tactic\", \"payload\": []}",
    "{\"id\": 8, \"cmd\": \"goal.tactic\", \"payload\": {\"stateId\": -3, \"tactic\": \"intro p\"}}",
    "{\"id\": 9, \"cmd\": \"goal.tactic\", \"payload\": {\"stateId\": 99999999999999999999, \"tactic\": \"x\"}}",
    "{\"id\": 10, \"cmd\": \"goal.start\", \"payload\": {\"expr\": 12}}",
    "ÿþ garbage ∃",
    "{\"id\": 11, \"cmd\": \"env.add\", \"payload\": {\"name\": \"\"}}",
    "   ",
]

live = []  # state ids handed out and not collected
dead = []  # collected ids


def sid():
    r = rng.random()
    if r < 0.78 and live:
        # bias towards recent states
        return live[-1 - min(len(live) - 1, int(rng.expovariate(0.6)))]
    if r < 0.9 and dead:
        return rng.choice(dead)
    return rng.choice([123456, 77, len(live) + len(dead) + 1])


def gid(state_goals):
    if state_goals and rng.random() < 0.8:
        return rng.choice(state_goals)
    return rng.randrange(1, 400)


goals_of = {}


def request(i):
    k = rng.random()
    if k < 0.08:
        return rng.choice(GARBAGE)
    if k < 0.2:
        return {"id": i, "cmd": "goal.start", "payload": {"expr": rng.choice(EXPRS)}}
    if k < 0.62:
        st = sid()
        p = {"stateId": st, "tactic": rng.choice(TACTICS)}
        if rng.random() < 0.25:
            p["goalId"] = gid(goals_of.get(st))
        if rng.random() < 0.05:
            del p["tactic"]
        return {"id": i, "cmd": "goal.tactic", "payload": p}
    if k < 0.68:
        return {"id": i, "cmd": "goal.continue", "payload": {"targetStateId": sid(), "basisStateId": sid()}}
    if k < 0.76:
        return {"id": i, "cmd": "goal.print", "payload": {"stateId": sid(), "sexp": rng.random() < 0.5}}
    if k < 0.8:
        return {"id": i, "cmd": "options.set",
                "payload": {"automaticMode": rng.random() < 0.7, "ppAll": rng.random() < 0.2,
                            "printExprAST": rng.random() < 0.2}}
    if k < 0.82:
        return {"id": i, "cmd": "options.get"}
    if k < 0.86:
        name = rng.choice(["lem1", "lem2", "lem1", "Nat.add", "c3"])
        p = {"name": name, "type": rng.choice(["1 = 1", "Nat", "True", "1 = 2"])}
        if rng.random() < 0.6:
            p["value"] = rng.choice(["Eq.refl 1", "3", "True.intro", "rfl"])
        return {"id": i, "cmd": "env.add", "payload": p}
    if k < 0.89:
        return {"id": i, "cmd": "env.inspect",
                "payload": {"name": rng.choice(["Or.inl", "Nat.le_trans", "lem1", "nope"]), "sexp": rng.random() < 0.5}}
    if k < 0.92:
        return {"id": i, "cmd": "frontend.process", "payload": {"source": rng.choice(SOURCES)}}
    if k < 0.95:
        if rng.random() < 0.75:
            keep = live[-12:]
        else:
            keep = sorted({sid() for _ in range(rng.randrange(1, 6))})
        return {"id": i, "cmd": "state.gc", "payload": {"keep": keep}}
    return {"id": i, "cmd": rng.choice(["goal.frobnicate", "", "GOAL.START", "env"]), "payload": {}}


def track(req, resp):
    if not resp.get("ok"):
        return
    r = resp["result"]
    for k in ("stateId", "nextStateId"):
        if k in r:
            live.append(r[k])
            goals_of[r[k]] = r.get("goals", [])
    for sg in r.get("sorries", []):
        live.append(sg["stateId"])
        goals_of[sg["stateId"]] = [sg["goalId"]]
    if isinstance(req, dict) and req.get("cmd") == "state.gc":
        keep = set(req["payload"]["keep"])
        for x in list(live):
            if x not in keep:
                live.remove(x)
                dead.append(x)


def main():
    repl, outdir = sys.argv[1], sys.argv[2]
    proc = subprocess.Popen([repl], stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, encoding="utf-8")
    with open(os.path.join(outdir, "fuzz_requests.jsonl"), "w", encoding="utf-8") as rq, \
            open(os.path.join(outdir, "fuzz_responses.jsonl"), "w", encoding="utf-8") as rs:
        for i in range(1, N + 1):
            req = request(i)
            line = req if isinstance(req, str) else json.dumps(req, ensure_ascii=False)
            rq.write(line + "\n")
            proc.stdin.write(line + "\n")
            proc.stdin.flush()
            if not line.strip():
                continue  # blank lines get no response
            out = proc.stdout.readline()
            rs.write(out)
            track(req, json.loads(out))
    proc.stdin.close()
    if proc.wait() != 0:
        sys.exit("server exited with " + str(proc.returncode))


if __name__ == "__main__":
    main()
