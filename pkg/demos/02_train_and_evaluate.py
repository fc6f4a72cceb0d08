"""Training the recognizer from scratch on synthetic data.

Builds a small synthetic corpus, trains the numpy CNN for a minute or so,
and reports accuracy on captures the model never saw. Saves the weights for
the streaming demo. Run from the repository root:

    python3 demos/02_train_and_evaluate.py
"""

from pathlib import Path

from signstream import (
    GestureNet,
    TrainConfig,
    encode_dataset,
    evaluate,
    generate_dataset,
    save_weights,
    train,
)

out_dir = Path("demo_out")
out_dir.mkdir(exist_ok=True)

print("generating data: 6 captures per gesture class for training,")
print("2 per class (different seed) held out for evaluation")
train_set = encode_dataset(generate_dataset(seed=7, captures_per_class=6))
heldout = encode_dataset(generate_dataset(seed=8, captures_per_class=2))

model = GestureNet(seed=7)
print(f"\nfresh network: {model.parameter_count():,} parameters")

cfg = TrainConfig(learning_rate=1e-4, epochs=80, seed=7)
print(f"training for {cfg.epochs} epochs (Adam, lr {cfg.learning_rate}) ...\n")
model, report = train(model, train_set, heldout, cfg)

print("epoch  train_acc  train_loss  heldout_acc")
for m in report.epochs[::10] + report.epochs[-1:]:
    print(f"{m.epoch:5d}  {m.train_accuracy:9.3f}  {m.train_loss:10.4f}  {m.val_accuracy:11.3f}")

loss, acc = evaluate(model, heldout)
print(f"\nheld-out accuracy {acc:.3f} (cross-entropy {loss:.4f}, no L1 term)")

weights = out_dir / "demo.gstr"
save_weights(model, weights)
(out_dir / "metrics.csv").write_text(report.to_csv(), encoding="utf-8")
print(f"saved weights to {weights} and the full curve to {out_dir / 'metrics.csv'}")
print("next: demos/03_streaming_recognition.py uses these weights")
