# Training defaults: encoder lr 1e-2, decoder lr 1e-3, 1000 inner decoder
# iterations per encoder step, two epochs over the data in batches of 50
DEFAULT_OUTER_EPOCHS = 2
DEFAULT_LR_ENCODER = 1e-2
DEFAULT_LR_DECODER = 1e-3
DEFAULT_INNER_ITERS = 1000
DEFAULT_BATCH_SIZE = 50

# Adam defaults
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8

# Inner solve stops once the full-batch decoder gradient is this small
INNER_GRAD_TOL = 1e-8

OPTIMIZER_ADAM = "adam"
OPTIMIZER_GD = "gd"

# Return the projected mean of the last epoch's encoders, with a decoder
# solved for it, instead of the final iterate. The multiple-subspace presets
# turn it on to settle the minibatch noise in the class spectra.
AVERAGE_LAST_EPOCH = False
