"""Regenerate the bundled fixture photos from scikit-image's sample data.

All sources are public domain or CC0 (see fixtures/README.md).
"""
import os

from PIL import Image
import skimage

DATA = os.path.join(os.path.dirname(skimage.__file__), "data")
HERE = os.path.dirname(os.path.abspath(__file__))


def cover_crop(src, width, height):
    im = Image.open(os.path.join(DATA, src)).convert("RGB")
    scale = max(width / im.width, height / im.height)
    size = (max(width, round(im.width * scale)), max(height, round(im.height * scale)))
    im = im.resize(size, Image.LANCZOS)
    left = (im.width - width) // 2
    top = (im.height - height) // 2
    return im.crop((left, top, left + width, top + height))


def region(src, box, width, height):
    im = Image.open(os.path.join(DATA, src)).convert("RGB").crop(box)
    return im.resize((width, height), Image.LANCZOS)


LARGE = {
    "astronaut": "astronaut.png",
    "coffee": "coffee.png",
    "chelsea": "chelsea.png",
    "rocket": "rocket.jpg",
    "ihc": "ihc.png",
}

if __name__ == "__main__":
    os.makedirs(os.path.join(HERE, "photos"), exist_ok=True)
    for name, src in LARGE.items():
        cover_crop(src, 672, 504).save(os.path.join(HERE, "photos", f"{name}.png"))
    os.makedirs(os.path.join(HERE, "small"), exist_ok=True)
    region("chelsea.png", (57, 24, 393, 276), 336, 252).save(
        os.path.join(HERE, "small", "chelsea_crop.png"))
    region("coffee.png", (132, 74, 468, 326), 336, 252).save(
        os.path.join(HERE, "small", "coffee_crop.png"))
