#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Renders the bundled media fixtures: the code sketch, the mountain sketch and a voice query clip."""
import math
import os
import struct
import wave

from PIL import Image, ImageDraw, ImageFont

HERE = os.path.dirname(os.path.abspath(__file__))
MEDIA = os.path.join(HERE, "..", "data", "media")

SKETCH_CODE = '''from datetime import date
from lunarcalendar import LunarDate

def solar_to_lunar(year, month, day):
    """Convert a solar calendar date to a lunar calendar date.
    :param year: Year in the solar calendar
    :param month: Month in the solar calendar
    :param day: Day in the solar calendar
    :return: A tuple representing the lunar calendar date (year, month, day)"""

    # Create a date object for the solar date
    solar_date = date(year, month, day)

    # Convert the solar date to a lunar date
    lunar_date = LunarDate.fromSolarDate(solar_date.year,
    solar_date.month, solar_date.day)

    # Return the lunar date as a tuple
    return (lunar_date.year, lunar_date.month, lunar_date.day)
'''


def code_image(path):
    font = ImageFont.load_default()
    lines = SKETCH_CODE.splitlines()
    img = Image.new("RGB", (640, 16 * len(lines) + 24), "white")
    draw = ImageDraw.Draw(img)
    for i, line in enumerate(lines):
        draw.text((12, 12 + 16 * i), line, fill="black", font=font)
    img.save(path, optimize=False)


def mountain_image(path):
    img = Image.new("RGB", (512, 320), (235, 242, 250))
    draw = ImageDraw.Draw(img)
    draw.polygon([(0, 300), (140, 110), (230, 220), (330, 70), (512, 300)], outline="black", fill=(200, 205, 210))
    draw.polygon([(300, 108), (330, 70), (362, 112), (340, 100), (322, 116)], fill="white", outline="black")
    draw.ellipse((410, 30, 460, 80), outline="black", fill=(250, 220, 120))
    draw.line((0, 300, 512, 300), fill="black", width=2)
    img.save(path, optimize=False)


def voice_clip(path):
    rate = 16000
    frames = bytearray()
    for i in range(rate * 2):
        t = i / rate
        envelope = 0.5 * (1 - math.cos(2 * math.pi * min(t, 2 - t) / 2)) if t < 2 else 0
        sample = 0.3 * envelope * (math.sin(2 * math.pi * 220 * t) + 0.5 * math.sin(2 * math.pi * 330 * t))
        frames += struct.pack("<h", int(sample * 32767))
    with wave.open(path, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(bytes(frames))


if __name__ == "__main__":
    os.makedirs(MEDIA, exist_ok=True)
    code_image(os.path.join(MEDIA, "sample_code.png"))
    mountain_image(os.path.join(MEDIA, "sample_mountain.png"))
    voice_clip(os.path.join(MEDIA, "voice_query.wav"))
