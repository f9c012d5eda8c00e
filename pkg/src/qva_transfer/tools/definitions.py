"""
Tool descriptions for qva-transfer MCP tools.
"""

# Dataset tool descriptions
GENERATE_DATASET_DESC = """Generate a seeded two-moons dataset, or derive a target domain from an existing one, and write it as CSV.

Parameters:
out* - Output CSV path (e.g. 'data/source.csv')
n - Number of samples, even (e.g. 2000)
noise - Gaussian noise standard deviation (e.g. 0.15)
seed - Random seed (e.g. 42)
rotate_deg - Rotation about the centroid in degrees (e.g. 60)
base - Existing dataset CSV to transform instead of generating

Example:
{"out": "data/source.csv", "n": 2000, "counts": {"-1": 1000, "1": 1000}}"""

# Model tool descriptions
PRETRAIN_MODEL_DESC = """Train a single-qubit variational classifier on a dataset by gradient descent and save it as JSON.

Parameters:
data* - Training CSV path
out* - Output model JSON path
epochs - Number of epochs (e.g. 100)
lr - Learning rate (e.g. 0.1)
batch - Mini-batch size (e.g. 32)
seed - Seed for initialization and shuffling

Example:
{"model": "models/pretrained.json", "loss": 412.7, "accuracy": 0.87}"""

EVALUATE_MODEL_DESC = """Compute the quadratic loss and sign-rule accuracy of a saved model on a dataset.

Parameters:
model* - Model JSON path
data* - Dataset CSV path

Example:
{"loss": 398.2, "accuracy": 0.88, "n": 2000}"""

# Transfer tool descriptions
ADAPT_QVA_DESC = """Adapt a pretrained model to a target domain in one shot by solving a linear least-squares system.

Parameters:
model* - Pretrained model JSON path
source* - Source dataset CSV path
target* - Target dataset CSV path
out - Adapted model JSON path (e.g. 'models/qva.json')

Example:
{"accuracy_before": 0.51, "accuracy_after": 0.79, "rank": 3, "delta_theta": [0.12, -0.40, 0.03]}"""

FINETUNE_GD_DESC = """Fine-tune a pretrained model on a target dataset by gradient descent.

Parameters:
model* - Pretrained model JSON path
target* - Target dataset CSV path
out - Fine-tuned model JSON path
epochs - Number of epochs (e.g. 30)
lr - Learning rate (e.g. 0.05)

Example:
{"accuracy_before": 0.51, "accuracy_after": 0.83, "epochs": 30}"""

COMPARE_METHODS_DESC = """Run the full benchmark: generate source and rotated target moons, pretrain, then compare one-shot QVA against GD fine-tuning.

Parameters:
out_dir - Directory for all artifacts (default: 'qva-runs/compare')

Example:
{"pretrain_acc": 0.87, "unadapted_target_acc": 0.52, "qva_target_acc": 0.79, "gd_final_acc": 0.84, "crossover_epoch": 6}"""
