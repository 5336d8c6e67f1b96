import json, time, numpy as np, torch
from pathlib import Path
from tempo.pdegen import generate_nsv_dataset
from tempo import datastore
from tempo.config import validate_config
from tempo.pipeline import train_ae_command, train_flow_command, evaluate_command, load_forecaster, dataset_tensor
from tempo.evaluation import evaluate_rollout

root = Path("/root/pkg/.testcache/calib")
data_path = root / "nsv_smoke.h5"
t0 = time.time()
if not data_path.exists():
    trajs = generate_nsv_dataset(64, grid=32, n_frames=30, dt_frame=1.0, dt=2e-3, seed=7)
    datastore.write_dataset(trajs, data_path)
print("data done", round(time.time()-t0,1), flush=True)

base = {
    "dataset": {"pde": "nsv", "path": str(data_path)},
    "ae": {"depth": 1, "base_channels": 16, "latent_channels": 4, "epochs": 12,
            "batch_size": 32, "lr": 1e-4, "checkpoint": str(root/"ae.ckpt")},
    "model": {"kind": "tempo", "n_modes": 8},
    "path": {"family": "river"},
    "train": {"seed": 0, "steps": 2000, "batch_size": 32, "seq_len": 16,
               "val_every": 200, "val_examples": 128, "checkpoint": "tempo.ckpt"},
    "sample": {"horizon": 40},
}
cfg = validate_config(json.loads(json.dumps(base)))
t0 = time.time()
if not (root/"ae.ckpt").exists():
    train_ae_command(cfg, root/"ae_run", log=print)
print("ae done", round((time.time()-t0)/60,1), "min", flush=True)

t0 = time.time()
ck = root/"tempo_run"/"tempo.ckpt"
if not ck.exists():
    ck = train_flow_command(cfg, root/"tempo_run", log=print)
print("tempo trained", round((time.time()-t0)/60,1), "min ->", ck, flush=True)

t0 = time.time()
res = evaluate_command(ck, data_path, root/"tempo_eval", protocol="next_step", seed=1, log=print)
print("tempo eval", round((time.time()-t0)/60,1), "min; pearson", res.metrics.pearson, "nfe", res.mean_nfe, flush=True)

# rollout robustness probe
fc = load_forecaster(ck)
data, meta = dataset_tensor(data_path)
rr, rolls = evaluate_rollout(fc["model"], fc["ae"], fc["path"], data, [60], horizon=28,
                             scaler=fc["scaler"], seed=2)
gen = rolls[60]
print("rollout finite:", bool(torch.isfinite(gen).all()), "max", float(gen.abs().max()),
      "train range", float(data.abs().max()), flush=True)
print("rollout pearson first/last:", rr.pearson_by_step[0], rr.pearson_by_step[-1], flush=True)

# vit for NFE comparison
import dataclasses
vit_cfg = validate_config(json.loads(json.dumps({**base,
    "model": {"kind": "vit"},
    "train": {**base["train"], "checkpoint": "vit.ckpt"}})))
t0 = time.time()
vck = root/"vit_run"/"vit.ckpt"
if not vck.exists():
    vck = train_flow_command(vit_cfg, root/"vit_run", log=print)
print("vit trained", round((time.time()-t0)/60,1), "min", flush=True)
vres = evaluate_command(vck, data_path, root/"vit_eval", protocol="next_step", seed=1, log=print)
print("vit eval pearson", vres.metrics.pearson, "nfe", vres.mean_nfe, flush=True)
print("NFE ordering tempo < vit:", res.mean_nfe < vres.mean_nfe, flush=True)
print("ALL CALIB DONE", flush=True)
